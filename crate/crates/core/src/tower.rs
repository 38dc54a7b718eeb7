//! Directed systems of complexes and their per-degree stabilization verdicts.

use std::collections::BTreeMap;
use std::fmt;

use crate::complex::{ChainComplex, ChainMap};
use crate::module::{FPModule, ModuleMap, Subquotient};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TowerVerdict {
    StablyIso,
    /// Transitions are not isomorphisms, but kernels and images have stopped moving, so the
    /// colimit is the image of the last transition.
    EssentiallyConstant,
    ProZero,
    Undetermined,
}

impl TowerVerdict {
    pub fn name(self) -> &'static str {
        match self {
            TowerVerdict::StablyIso => "stably-iso",
            TowerVerdict::EssentiallyConstant => "essentially-constant",
            TowerVerdict::ProZero => "pro-zero",
            TowerVerdict::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for TowerVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a single transition does on one homology module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transition {
    Zero,
    Iso,
    Other,
}

impl Transition {
    pub fn classify(map: &ModuleMap) -> Transition {
        if map.is_zero() {
            Transition::Zero
        } else if map.is_iso() {
            Transition::Iso
        } else {
            Transition::Other
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Transition::Zero => "zero",
            Transition::Iso => "iso",
            Transition::Other => "other",
        }
    }
}

/// Verdict from the transitions seen in one degree: the last two decide.
pub fn verdict(transitions: &[Transition]) -> TowerVerdict {
    match transitions {
        [.., Transition::Zero, Transition::Zero] => TowerVerdict::ProZero,
        [.., Transition::Iso, Transition::Iso] => TowerVerdict::StablyIso,
        _ => TowerVerdict::Undetermined,
    }
}

/// For `X --f--> Y --g--> Z`: `ker(g f) = ker f` and `im g = im(g f)`. Then `f` induces an
/// isomorphism `im f ≅ im g`.
pub fn essentially_stable(f: &ModuleMap, g: &ModuleMap) -> bool {
    let gf = g.after(f);
    let kernel_settled = gf.kernel_generators().iter().all(|k| f.target.is_zero_element(&f.matrix.apply(k)));
    if !kernel_settled {
        return false;
    }
    let image = Subquotient::new(g.ring(), g.target.rank(), gf.matrix.cols.clone(), g.target.relations().to_vec());
    g.matrix.cols.iter().all(|c| image.express(c).is_some())
}

/// `X / ker f`, presented on the generators of `X`.
pub fn image_module(f: &ModuleMap) -> FPModule {
    let mut rels = f.source.relations().to_vec();
    rels.extend(f.kernel_generators());
    FPModule::new(f.ring(), f.source.rank(), rels).prune().module
}

/// Stages `X_1 → X_2 → …` with their homology in a window of degrees.
#[derive(Clone, Debug)]
pub struct Tower {
    /// Stage labels (for example the neighborhood order `m`).
    pub labels: Vec<usize>,
    pub stages: Vec<ChainComplex>,
    pub homology: Vec<BTreeMap<i64, Subquotient>>,
    /// `induced[k][d]`: the map `H_d(stage k) → H_d(stage k+1)`.
    pub induced: Vec<BTreeMap<i64, ModuleMap>>,
    pub transitions: BTreeMap<i64, Vec<Transition>>,
    pub verdicts: BTreeMap<i64, TowerVerdict>,
}

impl Tower {
    /// Builds the tower from stages and chain-level transition maps, computing homology in the
    /// given degrees.
    pub fn new(labels: Vec<usize>, stages: Vec<ChainComplex>, maps: Vec<ChainMap>, degrees: &[i64]) -> Tower {
        assert_eq!(stages.len(), labels.len());
        assert_eq!(maps.len() + 1, stages.len().max(1));
        let homology: Vec<BTreeMap<i64, Subquotient>> = crate::par::map(&stages, |c| {
            degrees.iter().map(|&d| (d, c.homology(d))).collect::<BTreeMap<_, _>>()
        });
        let induced: Vec<BTreeMap<i64, ModuleMap>> = crate::par::map_range(maps.len(), |k| {
            degrees
                .iter()
                .map(|&d| {
                    let m = maps[k]
                        .on_homology(d, &homology[k][&d], &homology[k + 1][&d])
                        .expect("chain maps induce maps on homology");
                    (d, m)
                })
                .collect()
        });
        Self::from_homology(labels, stages, homology, induced)
    }

    /// Builds the tower from precomputed homology and induced maps.
    pub fn from_homology(
        labels: Vec<usize>,
        stages: Vec<ChainComplex>,
        homology: Vec<BTreeMap<i64, Subquotient>>,
        induced: Vec<BTreeMap<i64, ModuleMap>>,
    ) -> Tower {
        let mut transitions: BTreeMap<i64, Vec<Transition>> = BTreeMap::new();
        for step in &induced {
            for (&d, m) in step {
                transitions.entry(d).or_default().push(Transition::classify(m));
            }
        }
        if let Some(first) = homology.first() {
            for &d in first.keys() {
                transitions.entry(d).or_default();
            }
        }
        let verdicts = transitions
            .iter()
            .map(|(&d, t)| {
                let v = verdict(t);
                if v != TowerVerdict::Undetermined || induced.len() < 3 {
                    return (d, v);
                }
                let k = induced.len();
                let step = |i: usize| induced[i].get(&d);
                let settled = (k - 3..k - 1).all(|i| match (step(i), step(i + 1)) {
                    (Some(f), Some(g)) => essentially_stable(f, g),
                    _ => false,
                });
                (d, if settled { TowerVerdict::EssentiallyConstant } else { v })
            })
            .collect();
        Tower { labels, stages, homology, induced, transitions, verdicts }
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.verdicts.keys().copied().collect()
    }

    /// Homology of the last stage in degree `d`.
    pub fn last(&self, d: i64) -> Option<&Subquotient> {
        self.homology.last().and_then(|h| h.get(&d))
    }

    /// The colimit in degree `d`, when the verdict determines it.
    pub fn colimit(&self, d: i64) -> Option<FPModule> {
        match self.verdicts.get(&d)? {
            TowerVerdict::StablyIso => self.last(d).map(|h| h.module.clone()),
            TowerVerdict::ProZero => self.last(d).map(|h| FPModule::zero(h.ring())),
            TowerVerdict::EssentiallyConstant => self.induced.last()?.get(&d).map(image_module),
            TowerVerdict::Undetermined => None,
        }
    }

    /// Degrees whose verdict is undetermined.
    pub fn undetermined(&self) -> Vec<i64> {
        self.verdicts.iter().filter(|(_, v)| **v == TowerVerdict::Undetermined).map(|(&d, _)| d).collect()
    }

    /// Number of generators of each stage's homology in degree `d` (after pruning).
    pub fn generator_counts(&self, d: i64) -> Vec<usize> {
        self.homology.iter().map(|h| h.get(&d).map(|s| s.module.rank()).unwrap_or(0)).collect()
    }

    /// Composite of the transitions from stage `from` to the last stage in degree `d`.
    pub fn composite_to_last(&self, from: usize, d: i64) -> Option<ModuleMap> {
        let mut acc: Option<ModuleMap> = None;
        for step in &self.induced[from..] {
            let m = step.get(&d)?.clone();
            acc = Some(match acc {
                None => m,
                Some(a) => m.after(&a),
            });
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_two_transitions_decide() {
        use Transition::*;
        assert_eq!(verdict(&[Other, Iso, Iso]), TowerVerdict::StablyIso);
        assert_eq!(verdict(&[Zero, Zero]), TowerVerdict::ProZero);
        assert_eq!(verdict(&[Iso]), TowerVerdict::Undetermined);
        assert_eq!(verdict(&[Iso, Zero]), TowerVerdict::Undetermined);
        assert_eq!(verdict(&[Zero, Iso, Other]), TowerVerdict::Undetermined);
    }

    #[test]
    fn torsion_that_dies_is_essentially_constant() {
        use crate::ring::RingPresentation;
        use crate::scalar::Field;
        let r = RingPresentation::polynomial("R", Field::Rational, &["x"]);
        let x = r.var(0);
        // R ⊕ R/(x) → R ⊕ R/(x), identity on R and zero on the torsion.
        let m = FPModule::new(&r, 2, vec![vec![r.zero(), x.clone()]]);
        let mut id = crate::matrix::Matrix::identity(&r, 2);
        id.cols[1][1] = r.zero();
        let f = ModuleMap::new(m.clone(), m.clone(), id).unwrap();
        assert_eq!(Transition::classify(&f), Transition::Other);
        assert!(essentially_stable(&f, &f));
        assert_eq!(image_module(&f).free_rank(), Some(1));
        // Multiplication by x on R never settles its image.
        let free = FPModule::free(&r, 1);
        let mx = ModuleMap::new(free.clone(), free, crate::matrix::Matrix::from_cols(1, 1, vec![vec![x]])).unwrap();
        assert!(!essentially_stable(&mx, &mx));
    }
}

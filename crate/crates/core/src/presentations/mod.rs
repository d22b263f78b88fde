//! Surface-group presentations behind a common trait, registered by name.
//!
//! Each variant packages its generator alphabet, relators, projection p to a
//! free group, and Dehn twist tau. The registry resolves the CLI names
//! `genus2-std`, `genus2-3bdy`, `n4`, `n-odd:<k>` to trait objects.
//!
//! Words are [`FreeWord`]s over the presentation's alphabet (no relator
//! normalization implied); the projection lands in an explicit free basis,
//! so nontriviality of images is decided by free reduction alone.

pub mod amalgam;

use crate::error::{Error, Result};
use crate::words::FreeWord;

pub trait SurfacePresentation: Send + Sync {
    /// Registry name, e.g. `genus2-3bdy` or `n-odd:3`.
    fn name(&self) -> String;
    fn generator_names(&self) -> Vec<String>;
    /// Relator words over the presentation alphabet; each freely reduces to
    /// itself.
    fn relators(&self) -> Vec<FreeWord>;
    /// Basis names of the free group the projection p lands in.
    fn projection_basis(&self) -> Vec<String>;
    /// Images of the presentation generators under p, over the free basis.
    fn projection_images(&self) -> Vec<FreeWord>;
    /// Images of the presentation generators under one application of tau.
    fn twist_generator_images(&self) -> Vec<FreeWord>;

    fn generator_count(&self) -> usize {
        self.generator_names().len()
    }

    fn validate(&self, w: &FreeWord) -> Result<()> {
        let count = self.generator_count();
        if let Some(g) = w.max_generator() {
            if g >= count {
                return Err(Error::VariantMismatch { index: g + 1, count });
            }
        }
        Ok(())
    }

    /// p(w) as a freely reduced word in the projection basis.
    fn project(&self, w: &FreeWord) -> Result<FreeWord> {
        self.validate(w)?;
        w.substitute(&self.projection_images())
    }

    /// tau^n(w), by n-fold generator substitution and free reduction.
    fn twist(&self, w: &FreeWord, n: u64) -> Result<FreeWord> {
        self.validate(w)?;
        w.substitute(&self.twist_images(n))
    }

    /// tau^n of every generator.
    fn twist_images(&self, n: u64) -> Vec<FreeWord> {
        let one = self.twist_generator_images();
        let mut images: Vec<FreeWord> =
            (0..self.generator_count()).map(FreeWord::generator).collect();
        for _ in 0..n {
            images = one
                .iter()
                .map(|w| w.substitute(&images).expect("generator indices are in range"))
                .collect();
        }
        images
    }

    fn parse_word(&self, input: &str, strict: bool) -> Result<FreeWord> {
        let names = self.generator_names();
        let w = FreeWord::parse(input, Some(&names), strict)?;
        self.validate(&w)?;
        Ok(w)
    }
}

fn gens(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn word(letters: &[(usize, i64)]) -> FreeWord {
    FreeWord::from_letters(letters.iter().copied())
}

/// Genus-2 orientable surface, standard presentation
/// < a1, b1, a2, b2 | [a1,b1] = [a2,b2] >.
/// p fixes a1, b1 and folds a2, b2 onto them; tau conjugates a2, b2 by the
/// separating curve c = [a1, b1].
pub struct Genus2Standard;

impl SurfacePresentation for Genus2Standard {
    fn name(&self) -> String {
        "genus2-std".into()
    }
    fn generator_names(&self) -> Vec<String> {
        gens(&["a1", "b1", "a2", "b2"])
    }
    fn relators(&self) -> Vec<FreeWord> {
        let a1 = FreeWord::generator(0);
        let b1 = FreeWord::generator(1);
        let a2 = FreeWord::generator(2);
        let b2 = FreeWord::generator(3);
        vec![a1.commutator(&b1).concat(&a2.commutator(&b2).inverse())]
    }
    fn projection_basis(&self) -> Vec<String> {
        gens(&["a1", "b1"])
    }
    fn projection_images(&self) -> Vec<FreeWord> {
        vec![
            FreeWord::generator(0),
            FreeWord::generator(1),
            FreeWord::generator(0),
            FreeWord::generator(1),
        ]
    }
    fn twist_generator_images(&self) -> Vec<FreeWord> {
        let c = FreeWord::generator(0).commutator(&FreeWord::generator(1));
        vec![
            FreeWord::generator(0),
            FreeWord::generator(1),
            FreeWord::generator(2).conjugate_by(&c),
            FreeWord::generator(3).conjugate_by(&c),
        ]
    }
}

/// Genus-2 surface as two pairs of pants:
/// < a0, a1, a2, t1, t2 | a0 a1 a2 = 1, a0 t1^-1 a1 t1 t2^-1 a2 t2 = 1 >.
/// p kills t1, t2; its target < a0, a1, a2 | a0 a1 a2 > is freely generated
/// by (a1, a2), with a0 rewritten as a2^-1 a1^-1. tau is the triple twist
/// a_i fixed, t_i -> a_i t_i a0^-1, so that p(tau^N(t_j)) = a_j^N a0^-N.
pub struct Genus2ThreeBoundary;

impl SurfacePresentation for Genus2ThreeBoundary {
    fn name(&self) -> String {
        "genus2-3bdy".into()
    }
    fn generator_names(&self) -> Vec<String> {
        gens(&["a0", "a1", "a2", "t1", "t2"])
    }
    fn relators(&self) -> Vec<FreeWord> {
        vec![
            word(&[(0, 1), (1, 1), (2, 1)]),
            word(&[(0, 1), (3, -1), (1, 1), (3, 1), (4, -1), (2, 1), (4, 1)]),
        ]
    }
    fn projection_basis(&self) -> Vec<String> {
        gens(&["a1", "a2"])
    }
    fn projection_images(&self) -> Vec<FreeWord> {
        vec![
            word(&[(1, -1), (0, -1)]), // a0 -> a2^-1 a1^-1 in the (a1, a2) basis
            FreeWord::generator(0),
            FreeWord::generator(1),
            FreeWord::identity(),
            FreeWord::identity(),
        ]
    }
    fn twist_generator_images(&self) -> Vec<FreeWord> {
        vec![
            FreeWord::generator(0),
            FreeWord::generator(1),
            FreeWord::generator(2),
            word(&[(1, 1), (3, 1), (0, -1)]),
            word(&[(2, 1), (4, 1), (0, -1)]),
        ]
    }
}

/// Non-orientable genus 4: < a1, a2, b1, b2 | a1^2 a2^2 b2^2 b1^2 = 1 >.
/// p sends b_i to a_i^-1; tau conjugates b1, b2 by gamma = (a1^2 a2^2)^-1.
pub struct N4;

impl SurfacePresentation for N4 {
    fn name(&self) -> String {
        "n4".into()
    }
    fn generator_names(&self) -> Vec<String> {
        gens(&["a1", "a2", "b1", "b2"])
    }
    fn relators(&self) -> Vec<FreeWord> {
        vec![word(&[(0, 2), (1, 2), (3, 2), (2, 2)])]
    }
    fn projection_basis(&self) -> Vec<String> {
        gens(&["a1", "a2"])
    }
    fn projection_images(&self) -> Vec<FreeWord> {
        vec![
            FreeWord::generator(0),
            FreeWord::generator(1),
            word(&[(0, -1)]),
            word(&[(1, -1)]),
        ]
    }
    fn twist_generator_images(&self) -> Vec<FreeWord> {
        let gamma = word(&[(0, 2), (1, 2)]).inverse();
        vec![
            FreeWord::generator(0),
            FreeWord::generator(1),
            FreeWord::generator(2).conjugate_by(&gamma),
            FreeWord::generator(3).conjugate_by(&gamma),
        ]
    }
}

/// Non-orientable odd genus 2k+1, k >= 2:
/// < a1..ak, c, b1..bk | a1^2 ... ak^2 c^2 bk^2 ... b1^2 = 1 >,
/// a double amalgam of free groups. p sends c to ak^-2, b_i to a_i^-1 for
/// i < k, and b_k to a_k. tau twists along gamma = (a1^2...ak^2)^-1 and
/// delta = bk^2...b1^2: it fixes the a_i, conjugates c by gamma and the b_i
/// by gamma delta.
pub struct NOdd {
    k: usize,
}

impl NOdd {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter("n-odd presentations need k >= 2".into()));
        }
        Ok(NOdd { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a_index(&self, i: usize) -> usize {
        i - 1
    }
    pub fn c_index(&self) -> usize {
        self.k
    }
    pub fn b_index(&self, i: usize) -> usize {
        self.k + i
    }

    /// gamma = (a1^2 ... ak^2)^-1 over the presentation alphabet.
    pub fn gamma(&self) -> FreeWord {
        let mut w = FreeWord::identity();
        for i in 1..=self.k {
            w = w.concat(&word(&[(self.a_index(i), 2)]));
        }
        w.inverse()
    }

    /// delta = bk^2 ... b1^2 over the presentation alphabet.
    pub fn delta(&self) -> FreeWord {
        let mut w = FreeWord::identity();
        for i in (1..=self.k).rev() {
            w = w.concat(&word(&[(self.b_index(i), 2)]));
        }
        w
    }
}

impl SurfacePresentation for NOdd {
    fn name(&self) -> String {
        format!("n-odd:{}", self.k)
    }
    fn generator_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.k).map(|i| format!("a{i}")).collect();
        names.push("c".into());
        names.extend((1..=self.k).map(|i| format!("b{i}")));
        names
    }
    fn relators(&self) -> Vec<FreeWord> {
        let mut w = self.gamma().inverse(); // a1^2 ... ak^2
        w = w.concat(&word(&[(self.c_index(), 2)]));
        w = w.concat(&self.delta());
        vec![w]
    }
    fn projection_basis(&self) -> Vec<String> {
        (1..=self.k).map(|i| format!("a{i}")).collect()
    }
    fn projection_images(&self) -> Vec<FreeWord> {
        let mut images: Vec<FreeWord> = (0..self.k).map(FreeWord::generator).collect();
        images.push(word(&[(self.k - 1, -2)])); // c -> ak^-2
        for i in 1..=self.k {
            if i < self.k {
                images.push(word(&[(i - 1, -1)])); // b_i -> a_i^-1
            } else {
                images.push(FreeWord::generator(self.k - 1)); // b_k -> a_k
            }
        }
        images
    }
    fn twist_generator_images(&self) -> Vec<FreeWord> {
        let gamma = self.gamma();
        let gd = gamma.concat(&self.delta());
        let mut images: Vec<FreeWord> = (0..self.k).map(FreeWord::generator).collect();
        images.push(FreeWord::generator(self.c_index()).conjugate_by(&gamma));
        for i in 1..=self.k {
            images.push(FreeWord::generator(self.b_index(i)).conjugate_by(&gd));
        }
        images
    }
}

/// Resolve a registry name to a presentation strategy.
pub fn lookup(name: &str) -> Result<Box<dyn SurfacePresentation>> {
    match name {
        "genus2-std" => Ok(Box::new(Genus2Standard)),
        "genus2-3bdy" => Ok(Box::new(Genus2ThreeBoundary)),
        "n4" => Ok(Box::new(N4)),
        other => {
            if let Some(k) = other.strip_prefix("n-odd:") {
                let k: usize =
                    k.parse().map_err(|_| Error::Parse(format!("bad n-odd genus `{k}`")))?;
                return Ok(Box::new(NOdd::new(k)?));
            }
            Err(Error::Parse(format!(
                "unknown presentation `{other}` (expected genus2-std | genus2-3bdy | n4 | n-odd:<k>)"
            )))
        }
    }
}

pub fn registry_names() -> &'static [(&'static str, &'static str)] {
    &[
        ("genus2-std", "<a1,b1,a2,b2 | [a1,b1]=[a2,b2]>"),
        ("genus2-3bdy", "<a0,a1,a2,t1,t2 | a0a1a2, a0 t1^-1 a1 t1 t2^-1 a2 t2>"),
        ("n4", "<a1,a2,b1,b2 | a1^2 a2^2 b2^2 b1^2>"),
        ("n-odd:<k>", "<a1..ak,c,b1..bk | a1^2..ak^2 c^2 bk^2..b1^2>, k >= 2"),
    ]
}

/// Baumslag-lemma hypothesis check: true iff for all 1 <= i <= n-1 the
/// conjugate g_i^-1 c_i g_i does not commute with c_{i+1}, decided exactly
/// in the free group via primitive roots. Takes g_0..g_n and c_1..c_n.
pub fn baumslag_check(g: &[FreeWord], c: &[FreeWord]) -> Result<bool> {
    if g.len() != c.len() + 1 {
        return Err(Error::Parameter(format!(
            "need n+1 words g and n words c, got {} and {}",
            g.len(),
            c.len()
        )));
    }
    for (i, ci) in c.iter().enumerate() {
        if ci.is_identity() {
            return Err(Error::TrivialCi(i + 1));
        }
    }
    let n = c.len();
    for i in 1..n {
        let conj = c[i - 1].conjugate_by(&g[i].inverse());
        if conj.commutes_with(&c[i]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bounded empirical witness for the asymptotic-injectivity statement: the
/// universally quantified threshold n0 is *not* certified, only the scanned
/// range is.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistScanReport {
    /// (N, p(tau^N(w))) for N = 0..=n_max.
    pub images: Vec<(u64, FreeWord)>,
    /// Smallest N with nontrivial image.
    pub first_nontrivial: Option<u64>,
    /// Least N0 <= n_max such that images are nontrivial for all N in
    /// [N0, n_max]; `None` when the image at n_max is trivial.
    pub stable_from: Option<u64>,
}

pub fn twist_injectivity_scan(
    pres: &dyn SurfacePresentation,
    w: &FreeWord,
    n_max: u64,
) -> Result<TwistScanReport> {
    if n_max < 1 {
        return Err(Error::Parameter("scan needs n_max >= 1".into()));
    }
    pres.validate(w)?;
    let mut images = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let image = pres.project(&pres.twist(w, n)?)?;
        images.push((n, image));
    }
    let first_nontrivial = images.iter().find(|(_, im)| !im.is_identity()).map(|&(n, _)| n);
    let mut stable_from = None;
    for &(n, ref im) in images.iter().rev() {
        if im.is_identity() {
            break;
        }
        stable_from = Some(n);
    }
    Ok(TwistScanReport { images, first_nontrivial, stable_from })
}

//! The registry of randomized property suites.
//!
//! Each suite draws its inputs from a per-case random stream and checks a
//! property on them. Inputs are kept so that any case can be replayed on its
//! own.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gen::{gen_with, perfect_power, CaseRng, Domain, GeneratorSpec};
use crate::analytic::{apply_restricted, log1p_series, AnalyticFunction};
use crate::coeff::{Coeff, CoeffMode, Tolerance};
use crate::error::Result;
use crate::exponent::{q_independent, q_member, recombine, Bound, Exponent, SubgroupBasis};
use crate::oexp::{check_axiom, olog, oexp, oexp_by_squaring, Axiom, Verdict};
use crate::parse::parse_series;
use crate::series::{Context, Series};
use crate::valuation::{additive_decompose, classify, mult_decompose, residue};

/// One generated input of a case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Series(Series),
    Exponents(Vec<Exponent>),
    Int(u32),
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Input::Series(s) => write!(f, "{s}"),
            Input::Exponents(v) => {
                let parts: Vec<String> = v.iter().map(|e| format!("[{}]", coords(e))).collect();
                write!(f, "{{{}}}", parts.join("; "))
            }
            Input::Int(n) => write!(f, "{n}"),
        }
    }
}

fn coords(e: &Exponent) -> String {
    e.coords().iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
}

/// Everything a suite needs besides its inputs.
#[derive(Clone, Debug)]
pub struct Env {
    pub ctx: Context,
    pub cutoff: Exponent,
    /// Agreement threshold for real-mode comparisons.
    pub tol: Tolerance,
    /// Looser threshold (10·epsilon) for roots and coefficient identities.
    pub loose_tol: Tolerance,
    /// Threshold for the squaring cross-check.
    pub squaring_tol: Tolerance,
    pub e3_bound: u32,
    pub spec: GeneratorSpec,
}

impl Env {
    pub fn new(ctx: Context, cutoff: Exponent, e3_bound: u32) -> Self {
        let p = match ctx.mode {
            CoeffMode::Real(p) => p,
            CoeffMode::Rational => 50,
        };
        let spec = GeneratorSpec::new(Domain::Field, ctx.dim, Bound::Finite(cutoff.clone()));
        Env {
            ctx,
            cutoff,
            tol: Tolerance::for_digits(p),
            loose_tol: Tolerance::from_exponent(p.saturating_sub(11).max(1)),
            squaring_tol: Tolerance::from_exponent(p.saturating_sub(12).max(1)),
            e3_bound,
            spec,
        }
    }

    fn draw(&self, domain: Domain, rng: &mut CaseRng) -> Series {
        gen_with(&self.spec.with_domain(domain), rng, self.ctx)
    }

    fn draw_exact(&self, domain: Domain, rng: &mut CaseRng) -> Series {
        gen_with(&self.spec.with_domain(domain).exact(), rng, self.ctx)
    }

    /// Rescales the infinitesimal part of `s ∈ 𝒪` so that its coefficients
    /// sum to at most `bound` in absolute value.
    fn tame(&self, s: &Series, bound: &BigRational) -> Series {
        let tail: BigRational = s
            .terms()
            .iter()
            .filter(|(e, _)| e.is_positive())
            .map(|(_, c)| c.to_rational().abs())
            .sum();
        let factor = if &tail > bound { bound / tail } else { BigRational::one() };
        let raw = s.terms().iter().map(|(e, c)| {
            let q = c.to_rational();
            (e.clone(), self.ctx.coeff(&if e.is_positive() { q * &factor } else { q }))
        });
        Series::normalize(self.ctx, raw, s.cutoff().clone()).expect("rescaled series is well-formed")
    }

    /// A positive unit `c·(1+ε)` whose relative tail `ε` has coefficient sum
    /// at most 1/2. Logarithms of such units have geometrically decaying
    /// coefficients, so `P`-digit arithmetic stays well conditioned.
    fn draw_tame_unit(&self, rng: &mut CaseRng) -> Series {
        let u = self.draw(Domain::PosUnits, rng);
        let c0 = residue(&u).expect("units lie in the ring").to_rational();
        self.tame(&u, &(c0 / BigRational::from_integer(BigInt::from(2))))
    }

    /// A nonzero series; in real mode its tail relative to the leading term
    /// is rescaled as in [`Env::draw_tame_unit`], because inverses and roots
    /// of `c·t^γ·(1+ε)` grow like powers of `ε` and would otherwise exceed
    /// what `P` digits can represent.
    fn draw_conditioned(&self, rng: &mut CaseRng) -> Series {
        let s = self.draw(Domain::Field, rng);
        if !self.is_real() {
            return s;
        }
        let lead = s.leading().expect("generated series have terms");
        let unit = s.shift(&-&lead.gamma);
        let c0 = lead.c.to_rational().abs();
        self.tame(&unit, &(c0 / BigRational::from_integer(BigInt::from(2)))).shift(&lead.gamma)
    }

    /// An element `r + ε` of 𝒪 whose infinitesimal part has coefficient sum
    /// at most 1/2, so that `exp` of it is a unit as in
    /// [`Env::draw_tame_unit`].
    fn draw_tame_ring(&self, rng: &mut CaseRng) -> Series {
        let x = self.draw(Domain::RingO, rng);
        self.tame(&x, &BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    fn target(&self) -> &Exponent {
        &self.cutoff
    }

    fn is_real(&self) -> bool {
        matches!(self.ctx.mode, CoeffMode::Real(_))
    }

    /// Equality on the common known range: structural in rational mode,
    /// within `tol` in real mode.
    fn same_with(&self, a: &Series, b: &Series, tol: &Tolerance) -> Result<bool> {
        a.agrees_with(b, Some(tol))
    }

    fn same(&self, a: &Series, b: &Series) -> Result<bool> {
        self.same_with(a, b, &self.tol)
    }

    fn coeff_close(&self, a: &Coeff, b: &Coeff, tol: &Tolerance) -> bool {
        if self.is_real() {
            tol.close(a, b)
        } else {
            a == b
        }
    }
}

pub type Generate = fn(&Env, &mut CaseRng) -> Vec<Input>;
pub type Check = fn(&Env, &[Input]) -> Result<Verdict>;

/// A named property over generated inputs.
pub struct Suite {
    pub name: &'static str,
    pub summary: &'static str,
    /// Runs in real mode even when the session is rational.
    pub real: bool,
    pub generate: Generate,
    pub check: Check,
}

fn series(inputs: &[Input], i: usize) -> &Series {
    match &inputs[i] {
        Input::Series(s) => s,
        other => panic!("input {i} is not a series: {other}"),
    }
}

fn int(inputs: &[Input], i: usize) -> u32 {
    match &inputs[i] {
        Input::Int(n) => *n,
        other => panic!("input {i} is not an integer: {other}"),
    }
}

fn exponents(inputs: &[Input], i: usize) -> &[Exponent] {
    match &inputs[i] {
        Input::Exponents(v) => v,
        other => panic!("input {i} is not an exponent list: {other}"),
    }
}

/// Collects named sub-checks; the first failure wins.
struct Claims(Vec<String>);

impl Claims {
    fn new() -> Self {
        Claims(Vec::new())
    }

    fn claim(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn verdict(self) -> Verdict {
        match self.0.into_iter().next() {
            None => Verdict::Pass,
            Some(msg) => Verdict::Fail(msg),
        }
    }
}

fn fail(msg: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict::Fail(msg.into()))
}

fn indeterminate(msg: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict::Indeterminate(msg.into()))
}

fn ser(v: Series) -> Input {
    Input::Series(v)
}

// ---------------------------------------------------------------- exact suites

fn gen_three_exact(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    (0..3).map(|_| ser(env.draw_exact(Domain::Field, rng))).collect()
}

fn check_field_axioms(env: &Env, x: &[Input]) -> Result<Verdict> {
    let (a, b, c) = (series(x, 0), series(x, 1), series(x, 2));
    let ctx = env.ctx;
    let mut cl = Claims::new();
    cl.claim(env.same(&a.add(b)?, &b.add(a)?)?, || "a+b ≠ b+a".into());
    cl.claim(env.same(&a.add(b)?.add(c)?, &a.add(&b.add(c)?)?)?, || "(a+b)+c ≠ a+(b+c)".into());
    cl.claim(env.same(&a.mul(b)?, &b.mul(a)?)?, || "ab ≠ ba".into());
    cl.claim(env.same(&a.mul(b)?.mul(c)?, &a.mul(&b.mul(c)?)?)?, || "(ab)c ≠ a(bc)".into());
    cl.claim(env.same(&a.mul(&b.add(c)?)?, &a.mul(b)?.add(&a.mul(c)?)?)?, || "a(b+c) ≠ ab+ac".into());
    cl.claim(&a.add(&Series::zero(ctx))? == a, || "a+0 ≠ a".into());
    cl.claim(&a.mul(&Series::one(ctx))? == a, || "a·1 ≠ a".into());
    cl.claim(env.same(&a.sub(a)?, &Series::zero(ctx))?, || "a-a ≠ 0".into());
    if !env.is_real() {
        cl.claim(a.sub(a)?.is_exact_zero(), || "a-a is not exactly 0".into());
        cl.claim(a.add(b)?.sub(b)? == *a, || "(a+b)-b ≠ a".into());
    }
    Ok(cl.verdict())
}

fn check_ordering(env: &Env, x: &[Input]) -> Result<Verdict> {
    let (a, b, c) = (series(x, 0), series(x, 1), series(x, 2));
    let ab = a.compare(b)?;
    let ba = b.compare(a)?;
    let mut cl = Claims::new();
    cl.claim(ab == ba.reverse(), || "compare is not antisymmetric".into());
    cl.claim(a.add(c)?.compare(&b.add(c)?)? == ab, || "order not preserved by adding c".into());
    let pos_c = c.abs()?;
    if !pos_c.is_exact_zero() {
        cl.claim(a.mul(&pos_c)?.compare(&b.mul(&pos_c)?)? == ab, || "order not preserved by multiplying by |c|".into());
    }
    let _ = env;
    Ok(cl.verdict())
}

fn gen_two(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    (0..2).map(|_| ser(env.draw(Domain::Field, rng))).collect()
}

fn check_valuation(_env: &Env, x: &[Input]) -> Result<Verdict> {
    let (a, b) = (series(x, 0), series(x, 1));
    let (va, vb) = (a.valuation()?, b.valuation()?);
    let (Bound::Finite(ga), Bound::Finite(gb)) = (&va, &vb) else {
        return indeterminate("zero operand");
    };
    let mut cl = Claims::new();
    cl.claim(a.mul(b)?.valuation()? == Bound::Finite(ga + gb), || "v(ab) ≠ v(a)+v(b)".into());
    let sum = a.add(b)?;
    let vs = match sum.valuation() {
        Ok(v) => v,
        Err(_) => return indeterminate("a+b has no known terms"),
    };
    let lo = va.clone().min(vb.clone());
    cl.claim(vs >= lo, || "v(a+b) < min(v(a), v(b))".into());
    if va != vb {
        cl.claim(vs == lo, || "v(a+b) ≠ min(v(a), v(b)) although v(a) ≠ v(b)".into());
    }
    Ok(cl.verdict())
}

fn check_convexity(_env: &Env, x: &[Input]) -> Result<Verdict> {
    let (a, b) = (series(x, 0).abs()?, series(x, 1).abs()?);
    let (lo, hi) = if a.compare(&b)? == Ordering::Greater { (b, a) } else { (a, b) };
    if lo.signum()? != Ordering::Greater {
        return indeterminate("operand is zero");
    }
    Ok(if hi.valuation()? <= lo.valuation()? {
        Verdict::Pass
    } else {
        Verdict::Fail("0 < a ≤ b but v(b) > v(a)".into())
    })
}

fn gen_one(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    vec![ser(env.draw(Domain::Field, rng))]
}

fn gen_conditioned(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    vec![ser(env.draw_conditioned(rng))]
}

fn check_invert(env: &Env, x: &[Input]) -> Result<Verdict> {
    let a = series(x, 0);
    let w = env.target();
    let inv = a.invert(w)?;
    let gamma = a.leading_or_err()?.gamma;
    let eff = Bound::Finite(w.clone()).min(a.cutoff().unshift(&gamma.scale_int(2)));
    let prod = a.mul(&inv)?;
    let mut cl = Claims::new();
    cl.claim(prod.cutoff() >= &eff.shift(&gamma), || {
        format!("a·inv(a) known only to {}, expected {}", prod.cutoff(), eff.shift(&gamma))
    });
    cl.claim(env.same(&prod, &Series::one(env.ctx))?, || format!("a·inv(a) = {prod}"));
    Ok(cl.verdict())
}

fn gen_root(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    let n = [2, 3, 4][rng.below(3)];
    let a = if env.is_real() {
        env.draw_conditioned(rng).abs().expect("generated series have terms")
    } else {
        // c·t^γ·(1+ε) with c a perfect n-th power, so the root is rational.
        let c = perfect_power(rng, n);
        let eps = env.draw(Domain::IdealM, rng);
        let gamma = env.draw(Domain::Field, rng).leading().expect("nonempty").gamma;
        let unit = Series::one(env.ctx).add(&eps).expect("same context");
        let a = unit.scale(&env.ctx.coeff(&c)).shift(&gamma);
        a.truncate(&Bound::Finite(env.cutoff.clone()))
    };
    vec![ser(a), Input::Int(n)]
}

fn check_roots(env: &Env, x: &[Input]) -> Result<Verdict> {
    let (a, n) = (series(x, 0), int(x, 1));
    let r = a.nth_root(n, env.target())?;
    let back = r.powi(i64::from(n), env.target())?;
    let mut cl = Claims::new();
    cl.claim(r.signum()? == Ordering::Greater, || "root of a positive element is not positive".into());
    cl.claim(env.same_with(&back, a, &env.loose_tol)?, || format!("root^{n} = {back}"));
    let lead = a.leading_or_err()?;
    let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
    let expect_cut = a.cutoff().unshift(&lead.gamma).shift(&lead.gamma.scale(&inv_n));
    cl.claim(r.cutoff() <= &expect_cut, || "root claims more precision than the input supports".into());
    Ok(cl.verdict())
}

fn check_decompositions(env: &Env, x: &[Input]) -> Result<Verdict> {
    let a = series(x, 0);
    let mut cl = Claims::new();
    let d = additive_decompose(a)?;
    cl.claim(d.recombine()? == *a, || "additive parts do not reconstruct the input".into());
    cl.claim(d.infinite_part.terms().keys().all(|e| e.is_negative()), || "infinite part has exponents ≥ 0".into());
    cl.claim(
        d.infinitesimal_part.terms().keys().all(|e| e.is_positive()),
        || "infinitesimal part has exponents ≤ 0".into(),
    );
    let pos = a.abs()?;
    let m = mult_decompose(&pos)?;
    cl.claim(m.c.is_positive(), || "multiplicative unit c is not positive".into());
    cl.claim(classify(&m.eps)?.in_m, || "eps is not infinitesimal".into());
    let back = m.recombine()?;
    cl.claim(env.same(&back, &pos)? && back.cutoff() == pos.cutoff(), || {
        "multiplicative parts do not reconstruct the input".into()
    });
    Ok(cl.verdict())
}

fn gen_residue(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    vec![
        ser(env.draw(Domain::RingO, rng)),
        ser(env.draw(Domain::RingO, rng)),
        ser(env.draw(Domain::PosUnits, rng)),
    ]
}

fn check_residue_hom(env: &Env, x: &[Input]) -> Result<Verdict> {
    let (a, b, u) = (series(x, 0), series(x, 1), series(x, 2));
    let (ra, rb) = (residue(a)?, residue(b)?);
    let mut cl = Claims::new();
    let t = &env.tol;
    cl.claim(env.coeff_close(&residue(&a.add(b)?)?, &ra.try_add(&rb)?, t), || "res(a+b) ≠ res a + res b".into());
    cl.claim(env.coeff_close(&residue(&a.mul(b)?)?, &ra.try_mul(&rb)?, t), || "res(ab) ≠ res a · res b".into());
    cl.claim(additive_decompose(a)?.real_part == ra, || "res a ≠ real part of a".into());
    if a.compare(b)? == Ordering::Less && ra != rb {
        cl.claim(ra.try_cmp(&rb)? == Ordering::Less, || "a < b but res a > res b".into());
    }
    let m = mult_decompose(u)?;
    cl.claim(m.gamma.is_zero(), || "positive unit has nonzero valuation".into());
    cl.claim(residue(u)? == m.c, || "res u ≠ c for a positive unit".into());
    Ok(cl.verdict())
}

fn gen_indep(_env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    let dim = rng.range(1, 4) as usize;
    let n_gs = rng.range(1, 3) as usize;
    let n_basis = rng.range(0, (5 - n_gs) as i64) as usize;
    let mut pool: Vec<Exponent> = Vec::new();
    let draw = |rng: &mut CaseRng, pool: &Vec<Exponent>| -> Exponent {
        // Often reuse earlier vectors so that dependent cases are common.
        if !pool.is_empty() && rng.chance(0.4) {
            let a = &pool[rng.below(pool.len())];
            let b = &pool[rng.below(pool.len())];
            let p = rng.rational(3, 3);
            let q = rng.rational(3, 3);
            &a.scale(&p) + &b.scale(&q)
        } else {
            let coords = (0..dim).map(|_| rng.rational(4, 3)).collect();
            Exponent::new(coords).expect("dim ≥ 1")
        }
    };
    let mut basis = Vec::new();
    for _ in 0..n_basis {
        let e = draw(rng, &pool);
        pool.push(e.clone());
        basis.push(e);
    }
    let mut gs = Vec::new();
    for _ in 0..n_gs {
        let e = draw(rng, &pool);
        pool.push(e.clone());
        gs.push(e);
    }
    vec![Input::Exponents(gs), Input::Exponents(basis), Input::Int(dim as u32)]
}

/// Rank over ℚ as the largest size of a nonvanishing minor, with
/// determinants expanded over permutations.
pub fn brute_force_rank(vectors: &[Exponent]) -> usize {
    let rows = vectors.len();
    let cols = vectors.first().map_or(0, Exponent::dim);
    let m: Vec<&[BigRational]> = vectors.iter().map(|v| v.coords()).collect();
    for k in (1..=rows.min(cols)).rev() {
        for rsel in subsets(rows, k) {
            for csel in subsets(cols, k) {
                if !leibniz_det(&m, &rsel, &csel).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn leibniz_det(m: &[&[BigRational]], rows: &[usize], cols: &[usize]) -> BigRational {
    let k = rows.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut total = BigRational::zero();
    loop {
        let mut inversions = 0;
        for i in 0..k {
            for j in i + 1..k {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = BigRational::one();
        for i in 0..k {
            term *= &m[rows[i]][cols[perm[i]]];
        }
        if inversions % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    total
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn check_indep(_env: &Env, x: &[Input]) -> Result<Verdict> {
    let (gs, basis, dim) = (exponents(x, 0), exponents(x, 1), int(x, 2) as usize);
    let sb = SubgroupBasis::new(dim, basis.to_vec())?;
    let base_rank = brute_force_rank(sb.generators());
    let mut stacked = sb.generators().to_vec();
    stacked.extend(gs.iter().cloned());
    let oracle = brute_force_rank(&stacked) == base_rank + gs.len();
    let mut cl = Claims::new();
    cl.claim(q_independent(gs, &sb)? == oracle, || format!("q_independent disagrees with the rank oracle ({oracle})"));
    for g in gs {
        let mut with_g = sb.generators().to_vec();
        with_g.push(g.clone());
        let member = brute_force_rank(&with_g) == base_rank;
        let cert = q_member(g, &sb)?;
        cl.claim(cert.is_some() == member, || format!("q_member disagrees with the rank oracle for {g}"));
        cl.claim(cert.is_some() != q_independent(std::slice::from_ref(g), &sb)?, || {
            "q_member and q_independent disagree".into()
        });
        if let Some(c) = cert {
            cl.claim(recombine(dim, sb.generators(), &c) == *g, || "certificate does not recombine".into());
        }
    }
    Ok(cl.verdict())
}

fn gen_roundtrip(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    let s = if rng.chance(0.5) {
        env.draw_exact(Domain::Field, rng)
    } else {
        env.draw(Domain::Field, rng)
    };
    vec![ser(s)]
}

fn check_roundtrip(env: &Env, x: &[Input]) -> Result<Verdict> {
    let s = series(x, 0);
    let text = s.to_string();
    let back = parse_series(&text, env.ctx)?;
    if back != *s {
        return fail(format!("`{text}` reparses as `{back}`"));
    }
    if back.to_string() != text {
        return fail(format!("printing is not stable for `{text}`"));
    }
    Ok(Verdict::Pass)
}

fn gen_domains(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    let k = rng.below(4);
    let d = [Domain::Field, Domain::RingO, Domain::IdealM, Domain::PosUnits][k];
    vec![ser(env.draw(d, rng)), Input::Int(k as u32)]
}

fn check_domains(_env: &Env, x: &[Input]) -> Result<Verdict> {
    let (s, k) = (series(x, 0), int(x, 1) as usize);
    let d = [Domain::Field, Domain::RingO, Domain::IdealM, Domain::PosUnits][k];
    Ok(if d.contains(s) {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("{s} is not in {d:?}"))
    })
}

// ----------------------------------------------------------- exponential suites

fn gen_ring(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    vec![ser(env.draw(Domain::RingO, rng))]
}

fn gen_tame_ring(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    vec![ser(env.draw_tame_ring(rng))]
}

fn gen_ring_pair(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    vec![ser(env.draw(Domain::RingO, rng)), ser(env.draw(Domain::RingO, rng))]
}

/// An element of 𝒪 whose residue lies in the open interval (-1, 1).
fn draw_in_box(env: &Env, rng: &mut CaseRng) -> Series {
    let eps = env.draw(Domain::IdealM, rng);
    let r = rng.unit_interval(env.spec.coeff_den_bound);
    eps.add(&Series::from_rational(env.ctx, &r)).expect("same context")
}

fn gen_box(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    vec![ser(draw_in_box(env, rng))]
}

fn axiom_verdict(env: &Env, axiom: Axiom, inputs: &[Series]) -> Result<Verdict> {
    Ok(check_axiom(axiom, inputs, env.target(), &env.tol)?.verdict)
}

fn check_e1(env: &Env, x: &[Input]) -> Result<Verdict> {
    axiom_verdict(env, Axiom::E1, &[series(x, 0).clone(), series(x, 1).clone()])
}

fn check_e2(env: &Env, x: &[Input]) -> Result<Verdict> {
    axiom_verdict(env, Axiom::E2, &[series(x, 0).clone()])
}

fn gen_e3(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    let n = rng.range(0, i64::from(env.e3_bound)) as u32;
    vec![ser(env.draw(Domain::RingO, rng)), Input::Int(n)]
}

fn check_e3(env: &Env, x: &[Input]) -> Result<Verdict> {
    axiom_verdict(env, Axiom::E3(int(x, 1)), &[series(x, 0).clone()])
}

/// `1 + |u|` for a positive unit `u`: a positive unit above 1.
fn gen_above_one(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    let u = env.draw_tame_unit(rng);
    vec![ser(Series::one(env.ctx).add(&u).expect("same context"))]
}

fn check_e4(env: &Env, x: &[Input]) -> Result<Verdict> {
    axiom_verdict(env, Axiom::E4, &[series(x, 0).clone()])
}

fn check_res(env: &Env, x: &[Input]) -> Result<Verdict> {
    axiom_verdict(env, Axiom::ResCompat, &[series(x, 0).clone()])
}

fn gen_ring_and_unit(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    vec![ser(env.draw_tame_ring(rng)), ser(env.draw_tame_unit(rng))]
}

fn check_log_inverse(env: &Env, x: &[Input]) -> Result<Verdict> {
    let (a, y) = (series(x, 0), series(x, 1));
    let w = env.target();
    let mut cl = Claims::new();
    let back = olog(&oexp(a, w)?, w)?;
    cl.claim(env.same(&back, a)?, || format!("log(exp x) = {back}"));
    let back = oexp(&olog(y, w)?, w)?;
    cl.claim(env.same(&back, y)?, || format!("exp(log y) = {back}"));
    Ok(cl.verdict())
}

fn gen_outside_log(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    let s = match rng.below(4) {
        0 => env.draw(Domain::IdealM, rng),
        1 => env.draw(Domain::PosUnits, rng).neg(),
        2 => {
            // Shift far enough down that the valuation is negative.
            let s = env.draw(Domain::RingO, rng);
            let mut down = vec![BigRational::zero(); env.ctx.dim];
            down[0] = -BigRational::from_integer(BigInt::from(1)) - rng.rational(6, 6).abs();
            s.shift(&Exponent::new(down).expect("dim ≥ 1"))
        }
        _ => Series::zero(env.ctx),
    };
    vec![ser(s)]
}

fn check_olog_zero(_env: &Env, x: &[Input]) -> Result<Verdict> {
    let s = series(x, 0);
    let l = olog(s, &_env.cutoff)?;
    Ok(if l.is_exact_zero() {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("log of a non-unit gave {l}"))
    })
}

fn check_uniqueness(env: &Env, x: &[Input]) -> Result<Verdict> {
    let a = series(x, 0);
    let direct = oexp(a, env.target())?;
    let squared = oexp_by_squaring(a, env.target())?;
    Ok(if env.same_with(&direct, &squared, &env.squaring_tol)? {
        Verdict::Pass
    } else {
        Verdict::Fail(format!(
            "exp x = {direct} but e(x/n)^n = {squared} (scaled error {:e})",
            direct.max_scaled_error(&squared)?
        ))
    })
}

fn check_monotonicity(env: &Env, x: &[Input]) -> Result<Verdict> {
    let (a, b) = (series(x, 0), series(x, 1));
    let ord = a.compare(b)?;
    let eo = oexp(a, env.target())?.compare(&oexp(b, env.target())?)?;
    Ok(if ord == eo {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("x {ord:?} y but exp x {eo:?} exp y"))
    })
}

fn gen_kernel(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    if rng.chance(0.2) {
        let w = env.cutoff.clone();
        vec![ser(Series::big_o(env.ctx, w))]
    } else {
        gen_ring(env, rng)
    }
}

fn check_kernel(env: &Env, x: &[Input]) -> Result<Verdict> {
    let a = series(x, 0);
    let e = oexp(a, env.target())?;
    let one_like = env.same(&e, &Series::one(env.ctx))?;
    let zero_like = env.same(a, &Series::zero(env.ctx))?;
    Ok(if one_like == zero_like {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("exp x = {e} for x = {a}"))
    })
}

fn check_exp_inverse(env: &Env, x: &[Input]) -> Result<Verdict> {
    let a = series(x, 0);
    let p = oexp(&a.neg(), env.target())?.mul(&oexp(a, env.target())?)?;
    Ok(if env.same(&p, &Series::one(env.ctx))? {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("exp(-x)·exp(x) = {p}"))
    })
}

// ----------------------------------------------------- coefficients and analytic

fn gen_coefficients(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    let ctx = env.ctx;
    let a = rng.rational(5, 20);
    let b = rng.rational(3, 20);
    let c = rng.nonzero_rational(100, 20).abs();
    let n = [2, 3, 5][rng.below(3)];
    vec![
        ser(Series::from_rational(ctx, &a)),
        ser(Series::from_rational(ctx, &b)),
        ser(Series::from_rational(ctx, &c)),
        Input::Int(n),
    ]
}

fn constant(s: &Series) -> Coeff {
    residue(s).expect("constants lie in the ring")
}

fn check_coefficients(env: &Env, x: &[Input]) -> Result<Verdict> {
    let (a, b, c, n) = (constant(series(x, 0)), constant(series(x, 1)), constant(series(x, 2)), int(x, 3));
    let t = &env.loose_tol;
    let mut cl = Claims::new();
    cl.claim(t.close(&a.exp()?.ln()?, &a), || "log(exp a) ≠ a".into());
    cl.claim(t.close(&c.nth_root(n)?.powi(i64::from(n))?, &c), || format!("root(c, {n})^{n} ≠ c"));
    let ab = a.try_add(&b)?;
    cl.claim(t.close(&ab.exp()?, &a.exp()?.try_mul(&b.exp()?)?), || "exp(a+b) ≠ exp a · exp b".into());
    Ok(cl.verdict())
}

fn check_pythagoras(env: &Env, x: &[Input]) -> Result<Verdict> {
    let a = series(x, 0);
    let s = apply_restricted(&AnalyticFunction::sin(), std::slice::from_ref(a), env.target())?;
    let c = apply_restricted(&AnalyticFunction::cos(), std::slice::from_ref(a), env.target())?;
    let sum = s.mul(&s)?.add(&c.mul(&c)?)?;
    Ok(if env.same(&sum, &Series::one(env.ctx))? {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("sin² + cos² = {sum}"))
    })
}

fn gen_taylor(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    let mut spec = env.spec.with_domain(Domain::IdealM);
    spec.max_terms = 4;
    let eps = gen_with(&spec, rng, env.ctx);
    let r = rng.unit_interval(env.spec.coeff_den_bound);
    vec![ser(Series::from_rational(env.ctx, &r)), ser(eps), Input::Int(rng.below(3) as u32)]
}

fn check_taylor(env: &Env, x: &[Input]) -> Result<Verdict> {
    let (r, eps, which) = (series(x, 0), series(x, 1), int(x, 2));
    let w = env.target();
    let arg = r.add(eps)?;
    let rc = constant(r);
    let at0 = |f: AnalyticFunction| apply_restricted(&f, std::slice::from_ref(eps), w);
    // Closed forms recentred at r, built from expansions at 0.
    let (name, shifted, closed) = match which {
        0 => (
            "exp",
            apply_restricted(&AnalyticFunction::exp(), &[arg], w)?,
            at0(AnalyticFunction::exp())?.scale(&rc.exp()?),
        ),
        1 => {
            let (s, c) = rc.sin_cos()?;
            let closed = at0(AnalyticFunction::cos())?
                .scale(&s)
                .add(&at0(AnalyticFunction::sin())?.scale(&c))?;
            ("sin", apply_restricted(&AnalyticFunction::sin(), &[arg], w)?, closed)
        }
        _ => {
            let (s, c) = rc.sin_cos()?;
            let closed = at0(AnalyticFunction::cos())?
                .scale(&c)
                .sub(&at0(AnalyticFunction::sin())?.scale(&s))?;
            ("cos", apply_restricted(&AnalyticFunction::cos(), &[arg], w)?, closed)
        }
    };
    Ok(if env.same(&shifted, &closed)? {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("{name}(r+ε) = {shifted}, recentred form {closed}"))
    })
}

/// An infinitesimal `ε` with coefficient sum at most 1/2 (see
/// [`Env::draw_tame_unit`]).
fn gen_tame_ideal(env: &Env, rng: &mut CaseRng) -> Vec<Input> {
    let u = env.draw_tame_unit(rng);
    let c = residue(&u).expect("units lie in the ring");
    let eps = u.scale(&Coeff::one(env.ctx.mode).try_div(&c).expect("c > 0")).sub(&Series::one(env.ctx));
    vec![ser(eps.expect("same context"))]
}

fn check_log1p_exp(env: &Env, x: &[Input]) -> Result<Verdict> {
    let eps = series(x, 0);
    let l = log1p_series(eps, env.target())?;
    let back = apply_restricted(&AnalyticFunction::exp(), &[l], env.target())?;
    let expect = Series::one(env.ctx).add(eps)?;
    Ok(if env.same(&back, &expect)? {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("e(log1p ε) = {back}"))
    })
}

/// All registered suites, in the order `all` runs them.
pub static SUITES: &[Suite] = &[
    Suite { name: "field_axioms", summary: "ring axioms on exact series", real: false, generate: gen_three_exact, check: check_field_axioms },
    Suite { name: "ordering", summary: "total order compatible with + and positive ·", real: false, generate: gen_three_exact, check: check_ordering },
    Suite { name: "valuation", summary: "v(ab)=v(a)+v(b), ultrametric inequality", real: false, generate: gen_two, check: check_valuation },
    Suite { name: "convexity", summary: "0<a≤b implies v(b)≤v(a)", real: false, generate: gen_two, check: check_convexity },
    Suite { name: "invert", summary: "a·inv(a)=1 up to the effective cutoff", real: false, generate: gen_conditioned, check: check_invert },
    Suite { name: "roots", summary: "root(a,n)^n=a for n in 2..4", real: false, generate: gen_root, check: check_roots },
    Suite { name: "decompositions", summary: "additive and multiplicative round trips", real: false, generate: gen_one, check: check_decompositions },
    Suite { name: "residue_hom", summary: "res is an order-reflecting ring homomorphism", real: false, generate: gen_residue, check: check_residue_hom },
    Suite { name: "indep", summary: "span membership/independence vs a rank oracle", real: false, generate: gen_indep, check: check_indep },
    Suite { name: "parser_roundtrip", summary: "parse(print(s)) = s", real: false, generate: gen_roundtrip, check: check_roundtrip },
    Suite { name: "domains", summary: "generated samples lie in their domain", real: false, generate: gen_domains, check: check_domains },
    Suite { name: "E1", summary: "exp(x+y) = exp x · exp y on the valuation ring", real: true, generate: gen_ring_pair, check: check_e1 },
    Suite { name: "E2", summary: "exp x = e(x) for |x| ≤ 1", real: true, generate: gen_box, check: check_e2 },
    Suite { name: "E3", summary: "x > n² implies exp x > x^n", real: true, generate: gen_e3, check: check_e3 },
    Suite { name: "E4", summary: "every y > 1 in the ring is exp of log y", real: true, generate: gen_above_one, check: check_e4 },
    Suite { name: "res", summary: "res(exp x) = e^(res x)", real: true, generate: gen_ring, check: check_res },
    Suite { name: "log_inverse", summary: "log∘exp = id and exp∘log = id", real: true, generate: gen_ring_and_unit, check: check_log_inverse },
    Suite { name: "olog_zero", summary: "log is 0 off the positive units", real: true, generate: gen_outside_log, check: check_olog_zero },
    Suite { name: "uniqueness", summary: "exp x = e(x/n)^n", real: true, generate: gen_ring, check: check_uniqueness },
    Suite { name: "monotonicity", summary: "exp is strictly increasing on the ring", real: true, generate: gen_ring_pair, check: check_monotonicity },
    Suite { name: "kernel", summary: "exp x = 1 exactly when x = 0", real: true, generate: gen_kernel, check: check_kernel },
    Suite { name: "exp_inverse", summary: "exp(-x) · exp x = 1", real: true, generate: gen_tame_ring, check: check_exp_inverse },
    Suite { name: "coefficients", summary: "real exp/log/root identities", real: true, generate: gen_coefficients, check: check_coefficients },
    Suite { name: "pythagoras", summary: "sin² + cos² = 1 in the unit box", real: true, generate: gen_box, check: check_pythagoras },
    Suite { name: "taylor_shift", summary: "f(r+ε) matches the recentred closed form", real: true, generate: gen_taylor, check: check_taylor },
    Suite { name: "log1p_exp", summary: "e(log(1+ε)) = 1+ε", real: true, generate: gen_tame_ideal, check: check_log1p_exp },
];

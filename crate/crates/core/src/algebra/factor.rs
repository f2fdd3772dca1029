//! Factorization of rational polynomials into irreducibles.
//!
//! Squarefree decomposition (Yun) followed by the Zassenhaus method on each
//! squarefree part: factor modulo a small prime (Cantor-Zassenhaus), lift
//! the factors with quadratic Hensel lifting past the Mignotte bound, and
//! recombine subsets of lifted factors by trial division over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::UniPoly;
use crate::error::{Error, Result};

/// Largest number of modular factors for which exhaustive recombination is
/// attempted.
pub const MAX_MODULAR_FACTORS: usize = 24;

/// A complete factorization `content * prod f_i^{e_i}` over the rationals.
///
/// Every `f_i` is irreducible, primitive with integer coefficients and a
/// positive leading coefficient. Factors are sorted by degree and then by
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigRational,
    pub factors: Vec<(UniPoly, usize)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> UniPoly {
        let mut acc = UniPoly::constant(self.content.clone());
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e as u64);
        }
        acc
    }
}

/// Factors `p` completely over the rationals.
pub fn factor_rational(p: &UniPoly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (content, prim) = p.content_and_primitive();
    let prim = UniPoly::from_big_ints(&prim);
    let mut factors = Vec::new();
    for (sqf, mult) in squarefree_decomposition(&prim) {
        for f in factor_squarefree(&sqf.primitive())? {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| poly_order(&a.0, &b.0).then(a.1.cmp(&b.1)));
    // a product of primitive polynomials is primitive (Gauss), so the content
    // absorbs only the sign/scale of the leading coefficients
    let expanded = factors.iter().fold(UniPoly::one(), |acc, (f, e)| &acc * &f.pow(*e as u64));
    let fixed_content = &p.leading() / &expanded.leading();
    debug_assert_eq!(fixed_content, content);
    Ok(Factorization { content: fixed_content, factors })
}

/// Total order used to sort factors deterministically.
pub fn poly_order(a: &UniPoly, b: &UniPoly) -> std::cmp::Ordering {
    a.deg().cmp(&b.deg()).then_with(|| {
        for (x, y) in a.coeffs().iter().rev().zip(b.coeffs().iter().rev()) {
            match x.cmp(y) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// True when `p` has no nontrivial factorization over the rationals.
pub fn is_irreducible(p: &UniPoly) -> Result<bool> {
    if p.is_constant() {
        return Ok(false);
    }
    let f = factor_rational(p)?;
    Ok(f.factors.len() == 1 && f.factors[0].1 == 1)
}

/// Yun's algorithm: returns monic squarefree, pairwise coprime parts with
/// their multiplicities.
pub fn squarefree_decomposition(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.exact_div(&a0).unwrap().monic();
    let mut c = dp.exact_div(&a0).unwrap().scale(&p.leading().recip());
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a).unwrap();
        c = d.exact_div(&a).unwrap();
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// Irreducible factors of a primitive squarefree integer polynomial.
fn factor_squarefree(f: &UniPoly) -> Result<Vec<UniPoly>> {
    let n = f.deg();
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    let mut out = Vec::new();
    let mut g = f.clone();
    if g.constant_term().is_zero() {
        out.push(UniPoly::x());
        g = g.exact_div(&UniPoly::x())?;
        if g.deg() == 0 {
            return Ok(out);
        }
    }
    let coeffs = g.content_and_primitive().1;
    if coeffs.len() <= 2 {
        out.push(g.primitive());
        return Ok(out);
    }
    out.extend(zassenhaus(&coeffs)?);
    Ok(out)
}

// ---------------------------------------------------------------------------
// arithmetic in F_p[x], p < 2^32, coefficients ascending, trimmed

type Fp = Vec<u64>;

fn trim(mut v: Fp) -> Fp {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_from_int(c: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(c.iter().map(|v| v.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let mut r = a.clone();
    let inv = fp_inv(b[db], p);
    let mut q = vec![0u64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] * inv % p;
        if c == 0 {
            continue;
        }
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - c * bj % p) % p;
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let (_, r) = fp_divrem(&x, &y, p);
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

fn fp_powmod(base: &Fp, exp: &BigInt, m: &Fp, p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let (_, mut b) = fp_divrem(base, m, p);
    let (_, digits) = exp.to_u64_digits();
    let bits = exp.bits();
    for i in 0..bits {
        let word = digits[(i / 64) as usize];
        if (word >> (i % 64)) & 1 == 1 {
            result = fp_divrem(&fp_mul(&result, &b, p), m, p).1;
        }
        if i + 1 < bits {
            b = fp_divrem(&fp_mul(&b, &b, p), m, p).1;
        }
    }
    result
}

/// Deterministic xorshift stream for the randomized equal-degree split.
struct Stream(u64);
impl Stream {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }
}

/// Monic irreducible factors of a monic squarefree polynomial over F_p.
fn fp_factor(f: &Fp, p: u64) -> Vec<Fp> {
    let mut out = Vec::new();
    // distinct-degree factorization
    let x: Fp = vec![0, 1];
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    let pb = BigInt::from(p);
    let mut groups: Vec<(Fp, usize)> = Vec::new();
    while rest.len() > 2 * d {
        h = fp_powmod(&h, &pb, &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            groups.push((g.clone(), d));
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
        }
        d += 1;
    }
    if rest.len() > 1 {
        let deg = rest.len() - 1;
        groups.push((rest, deg));
    }
    // equal-degree splitting
    let mut rng = Stream(0x9E37_79B9_7F4A_7C15);
    for (g, d) in groups {
        let mut stack = vec![g];
        while let Some(u) = stack.pop() {
            if u.len() - 1 == d {
                out.push(fp_monic(&u, p));
                continue;
            }
            let exp: BigInt = (num_traits::pow(BigInt::from(p), d) - 1) / 2;
            loop {
                let a: Fp = trim((0..u.len() - 1).map(|_| rng.next() % p).collect());
                if a.len() < 2 {
                    continue;
                }
                let b = fp_sub(&fp_powmod(&a, &exp, &u, p), &vec![1], p);
                let g = fp_gcd(&b, &u, p);
                if g.len() > 1 && g.len() < u.len() {
                    let other = fp_monic(&fp_divrem(&u, &g, p).0, p);
                    stack.push(g);
                    stack.push(other);
                    break;
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// integer polynomials modulo m = p^k

type Zp = Vec<BigInt>;

fn zm_trim(mut v: Zp) -> Zp {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn zm_reduce(v: &[BigInt], m: &BigInt) -> Zp {
    zm_trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn zm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zm_trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn zm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zm_trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zm_reduce(&out, m)
}

/// Division by a monic polynomial modulo m.
fn zm_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Zp, Zp) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] = (&r[i + j] - &c * bj).mod_floor(m);
        }
        q[i] = c;
    }
    r.truncate(db);
    (zm_trim(q), zm_reduce(&r, m))
}

fn fp_to_zp(a: &Fp) -> Zp {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Extended Euclid over F_p: returns (s, t) with s a + t b = 1.
fn fp_bezout(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    // r0 is a nonzero constant
    let inv = fp_inv(r0[0], p);
    let scale = |v: &Fp| trim(v.iter().map(|&c| c * inv % p).collect());
    (scale(&s0), scale(&t0))
}

/// Lifts a factorization `f = g h (mod p)` with monic `g`, `h` to modulo
/// `target`, where `f` is monic modulo `target`.
fn hensel_pair(f: &Zp, g: &Fp, h: &Fp, p: u64, target: &BigInt) -> (Zp, Zp) {
    let (s, t) = fp_bezout(g, h, p);
    let (mut g, mut h, mut s, mut t) = (fp_to_zp(g), fp_to_zp(h), fp_to_zp(&s), fp_to_zp(&t));
    let mut m = BigInt::from(p);
    while &m < target {
        let m2 = &m * &m;
        let fm = zm_reduce(f, &m2);
        let e = zm_sub(&fm, &zm_mul(&g, &h, &m2), &m2);
        let (q, r) = zm_divrem_monic(&zm_mul(&s, &e, &m2), &h, &m2);
        let g_new = zm_add(&zm_add(&g, &zm_mul(&t, &e, &m2), &m2), &zm_mul(&q, &g, &m2), &m2);
        let h_new = zm_add(&h, &r, &m2);
        let b = zm_sub(
            &zm_add(&zm_mul(&s, &g_new, &m2), &zm_mul(&t, &h_new, &m2), &m2),
            &[BigInt::one()],
            &m2,
        );
        let (c, d) = zm_divrem_monic(&zm_mul(&s, &b, &m2), &h_new, &m2);
        s = zm_sub(&s, &d, &m2);
        t = zm_sub(&zm_sub(&t, &zm_mul(&t, &b, &m2), &m2), &zm_mul(&c, &g_new, &m2), &m2);
        g = g_new;
        h = h_new;
        m = m2;
    }
    (zm_reduce(&g, target), zm_reduce(&h, target))
}

/// Lifts all modular factors of a monic-mod-p^k polynomial.
fn hensel_multi(f: &Zp, factors: &[Fp], p: u64, target: &BigInt) -> Vec<Zp> {
    if factors.len() == 1 {
        return vec![zm_reduce(f, target)];
    }
    let mid = factors.len() / 2;
    let prod = |fs: &[Fp]| fs.iter().fold(vec![1u64], |acc, u| fp_mul(&acc, u, p));
    let g = prod(&factors[..mid]);
    let h = prod(&factors[mid..]);
    let (gl, hl) = hensel_pair(f, &g, &h, p, target);
    let mut out = hensel_multi(&gl, &factors[..mid], p, target);
    out.extend(hensel_multi(&hl, &factors[mid..], p, target));
    out
}

fn small_primes() -> impl Iterator<Item = u64> {
    (101u64..20_000).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

fn symmetric(v: &BigInt, m: &BigInt) -> BigInt {
    let r = v.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn int_divides(divisor: &[BigInt], dividend: &[BigInt]) -> Option<Zp> {
    let d = UniPoly::from_big_ints(divisor);
    let n = UniPoly::from_big_ints(dividend);
    let (q, r) = n.div_rem(&d).ok()?;
    if !r.is_zero() || q.coeffs().iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(q.coeffs().iter().map(|c| c.numer().clone()).collect())
}

/// Zassenhaus factorization of a primitive squarefree integer polynomial of
/// degree at least 2 with nonzero constant term.
fn zassenhaus(f: &[BigInt]) -> Result<Vec<UniPoly>> {
    let n = f.len() - 1;
    let lc = f[n].clone();
    let fd = {
        let p = UniPoly::from_big_ints(f);
        p.derivative()
    };
    let fd_int = fd.content_and_primitive().1;

    // choose the admissible prime giving the fewest modular factors
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % p).is_zero() {
            continue;
        }
        let fp = fp_from_int(f, p);
        if fp.len() != n + 1 {
            continue;
        }
        let g = fp_gcd(&fp, &fp_from_int(&fd_int, p), p);
        if g.len() != 1 {
            continue;
        }
        let facs = fp_factor(&fp_monic(&fp, p), p);
        if facs.len() == 1 {
            return Ok(vec![UniPoly::from_big_ints(f)]);
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, mod_factors) = best.ok_or_else(|| Error::FactorLimit("no admissible prime".into()))?;
    if mod_factors.len() > MAX_MODULAR_FACTORS {
        return Err(Error::FactorLimit(format!(
            "{} modular factors exceed the recombination limit {MAX_MODULAR_FACTORS}",
            mod_factors.len()
        )));
    }

    // Mignotte-style bound on coefficients of lc * (any factor)
    let norm2_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm2 = norm2_sq.sqrt() + 1;
    let bound: BigInt = (BigInt::one() << n) * norm2 * lc.abs();
    let mut target = BigInt::from(p);
    while target <= &bound * 2 {
        target *= p;
    }

    let lc_inv = lc.modinv(&target).ok_or_else(|| Error::Invariant("lc not invertible".into()))?;
    let f_monic: Zp = zm_reduce(&f.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), &target);
    let lifted = hensel_multi(&f_monic, &mod_factors, p, &target);

    // recombination
    let mut remaining: Vec<Zp> = lifted;
    let mut g: Zp = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = false;
        let lc_g = g.last().unwrap().clone();
        for subset in Combinations::new(remaining.len(), size) {
            let mut cand: Zp = vec![lc_g.clone()];
            for &i in &subset {
                cand = zm_mul(&cand, &remaining[i], &target);
            }
            let cand: Zp = cand.iter().map(|c| symmetric(c, &target)).collect();
            let prim = UniPoly::from_big_ints(&cand).content_and_primitive().1;
            if let Some(q) = int_divides(&prim, &g) {
                out.push(UniPoly::from_big_ints(&prim));
                g = UniPoly::from_big_ints(&q).content_and_primitive().1;
                let keep: Vec<Zp> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                remaining = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if g.len() > 1 {
        out.push(UniPoly::from_big_ints(&g));
    }
    Ok(out)
}

/// Lexicographic k-subsets of {0..n}.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let cur = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(cur)
    }
}

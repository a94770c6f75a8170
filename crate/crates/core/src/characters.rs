//! Additive and multiplicative characters modulo a Gaussian integer.
//!
//! Phases are kept as exact fractions `numerator / denominator` reduced into
//! `[0, 1)`; complex values are produced from them only at the end, so
//! orthogonality and properness tests can be decided exactly.

use std::collections::HashSet;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gaussian::{divisors, GaussianInt, ResidueSystem, ONE};

/// Largest modulus norm accepted by the group decomposition.
pub const CHARACTER_NORM_CAP: i64 = 2000;

/// `e(x) = exp(2πi·x)`.
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * x)
}

/// `e(num/den)` with the numerator reduced first.
pub fn e_frac(num: i64, den: i64) -> Complex64 {
    let k = num.rem_euclid(den);
    e(k as f64 / den as f64)
}

/// One evaluation of the additive character `n ↦ e(Re(n·r/q))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdditiveCharEval {
    pub modulus: GaussianInt,
    pub twist: GaussianInt,
    /// In `[0, phase_denominator)`.
    pub phase_numerator: i64,
    /// Equal to `norm(modulus)`.
    pub phase_denominator: i64,
    pub value: Complex64,
}

/// Exact phase numerator of `e(Re(n·r·conj(q))/N(q))`, reduced mod `N(q)`.
///
/// Written out in coordinates this is `((sx - ty)u + (sy + tx)v) / N(q)` for
/// `q = u+vi`, `r = x+yi`, `n = s+ti`.
pub fn additive_phase(q: GaussianInt, r: GaussianInt, n: GaussianInt) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let m = q.norm() as i128;
    let (u, v) = (q.re as i128, q.im as i128);
    let (x, y) = (r.re as i128, r.im as i128);
    let (s, t) = (n.re as i128, n.im as i128);
    let num = (s * x - t * y) * u + (s * y + t * x) * v;
    Ok(num.rem_euclid(m) as i64)
}

pub fn additive_char_eval(q: GaussianInt, r: GaussianInt, n: GaussianInt) -> Result<AdditiveCharEval> {
    let num = additive_phase(q, r, n)?;
    let den = q.norm();
    Ok(AdditiveCharEval {
        modulus: q,
        twist: r,
        phase_numerator: num,
        phase_denominator: den,
        value: e_frac(num, den),
    })
}

/// `e(Tr(n·r / 2q)) = e(Re(n·r·conj(q)) / N(q))`.
pub fn additive_char(q: GaussianInt, r: GaussianInt, n: GaussianInt) -> Result<Complex64> {
    Ok(additive_char_eval(q, r, n)?.value)
}

/// Sum of `additive_char(q, r, m)` over a full residue system `r mod q`.
pub fn orthogonality_sum(q: GaussianInt, m: GaussianInt) -> Result<Complex64> {
    let rs = ResidueSystem::new(q)?;
    rs.representatives()
        .iter()
        .map(|&r| additive_char(q, r, m))
        .sum()
}

/// Decomposition of `(ℤ[i]/q)*` into a direct product of cyclic groups.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    modulus: GaussianInt,
    residues: ResidueSystem,
    /// Reduced representatives; group elements are indices into this list.
    elements: Vec<GaussianInt>,
    generators: Vec<GaussianInt>,
    orders: Vec<u64>,
    /// Exponent vector of each element with respect to `generators`.
    logs: Vec<Vec<u64>>,
    /// Maps a residue-system index to an element index, if reduced.
    element_of_class: Vec<Option<usize>>,
}

impl UnitGroup {
    pub fn new(q: GaussianInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroModulus);
        }
        if q.norm() > CHARACTER_NORM_CAP {
            return Err(Error::NormCap { norm: q.norm(), cap: CHARACTER_NORM_CAP });
        }
        let residues = ResidueSystem::new(q)?;
        let elements: Vec<GaussianInt> = residues.reduced().collect();
        let mut element_of_class = vec![None; residues.len()];
        for (k, &g) in elements.iter().enumerate() {
            element_of_class[residues.class_of(g)] = Some(k);
        }
        let size = elements.len();
        let identity = element_of_class[residues.class_of(ONE)].expect("1 is a unit");
        let mul = |a: usize, b: usize| -> usize {
            element_of_class[residues.class_of(elements[a] * elements[b])].expect("closed under products")
        };

        // Greedy basis: repeatedly take an element of maximal order in G/H,
        // then search its coset for a lift whose order in G equals that order.
        let mut in_h = vec![false; size];
        in_h[identity] = true;
        let mut h_elems = vec![identity];
        let mut gens: Vec<usize> = Vec::new();
        let mut orders: Vec<u64> = Vec::new();
        while h_elems.len() < size {
            let quotient_order = |x: usize| -> u64 {
                let (mut y, mut m) = (x, 1u64);
                while !in_h[y] {
                    y = mul(y, x);
                    m += 1;
                }
                m
            };
            let (best, m) = (0..size)
                .filter(|&x| !in_h[x])
                .map(|x| (x, quotient_order(x)))
                .max_by_key(|&(x, m)| (m, std::cmp::Reverse(x)))
                .expect("H is a proper subgroup");
            let lift = h_elems
                .iter()
                .map(|&h| mul(best, h))
                .find(|&y| {
                    let mut z = y;
                    for _ in 1..m {
                        z = mul(z, y);
                    }
                    z == identity
                })
                .expect("a complement lift exists in a finite abelian group");
            // H <- H × <lift>
            let mut new_elems = Vec::with_capacity(h_elems.len() * m as usize);
            let mut power = identity;
            for _ in 0..m {
                for &h in &h_elems {
                    new_elems.push(mul(power, h));
                }
                power = mul(power, lift);
            }
            for &x in &new_elems {
                in_h[x] = true;
            }
            h_elems = new_elems;
            gens.push(lift);
            orders.push(m);
        }

        // Exponent vectors by enumerating all products of generator powers.
        let mut logs = vec![Vec::new(); size];
        let mut assigned = vec![false; size];
        let mut exps = vec![0u64; gens.len()];
        loop {
            let mut x = identity;
            for (&gk, &ek) in gens.iter().zip(&exps) {
                for _ in 0..ek {
                    x = mul(x, gk);
                }
            }
            debug_assert!(!assigned[x], "generators are not independent");
            assigned[x] = true;
            logs[x] = exps.clone();
            if !increment(&mut exps, &orders) {
                break;
            }
        }
        debug_assert!(assigned.iter().all(|&a| a));

        Ok(Self {
            modulus: q,
            generators: gens.iter().map(|&k| elements[k]).collect(),
            residues,
            elements,
            orders,
            logs,
            element_of_class,
        })
    }

    pub fn modulus(&self) -> GaussianInt {
        self.modulus
    }

    pub fn generators(&self) -> &[GaussianInt] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Group exponent: the lcm of the generator orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| acc.lcm(&o))
    }

    pub fn elements(&self) -> &[GaussianInt] {
        &self.elements
    }

    pub fn residues(&self) -> &ResidueSystem {
        &self.residues
    }

    /// Index of the class of `g` in [`Self::elements`], if `g` is a unit mod q.
    pub fn element_index(&self, g: GaussianInt) -> Option<usize> {
        self.element_of_class[self.residues.class_of(g)]
    }

    /// Exponent vector of `g`, or `None` when `g` is not a unit mod q.
    pub fn discrete_log(&self, g: GaussianInt) -> Option<&[u64]> {
        self.element_of_class[self.residues.class_of(g)].map(|k| self.logs[k].as_slice())
    }
}

/// Odometer increment over the mixed radix `orders`; false on wrap-around.
fn increment(exps: &mut [u64], orders: &[u64]) -> bool {
    for (e, &o) in exps.iter_mut().zip(orders) {
        *e += 1;
        if *e < o {
            return true;
        }
        *e = 0;
    }
    false
}

/// Generators and their orders for `(ℤ[i]/q)*`.
pub fn unit_group_structure(q: GaussianInt) -> Result<(Vec<GaussianInt>, Vec<u64>)> {
    let g = UnitGroup::new(q)?;
    Ok((g.generators.clone(), g.orders.clone()))
}

/// A character of `(ℤ[i]/q)*`, sending generator `k` to `e(exponent[k] / order[k])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicativeCharacter {
    pub modulus: GaussianInt,
    pub generator_orders: Vec<u64>,
    pub exponent_vector: Vec<u64>,
    pub proper: bool,
}

impl MultiplicativeCharacter {
    pub fn is_trivial(&self) -> bool {
        self.exponent_vector.iter().all(|&e| e == 0)
    }

    /// Exact phase of `χ(g)` as a numerator over `group.exponent()`, or
    /// `None` when `g` is not coprime to the modulus.
    pub fn phase(&self, group: &UnitGroup, g: GaussianInt) -> Result<Option<u64>> {
        self.check_modulus(group)?;
        let l = group.exponent();
        Ok(group.discrete_log(g).map(|log| {
            log.iter()
                .zip(&self.exponent_vector)
                .zip(&self.generator_orders)
                .map(|((&lk, &ck), &ok)| (lk * ck % ok) * (l / ok))
                .sum::<u64>()
                % l
        }))
    }

    /// `χ(g)`, zero on non-units.
    pub fn value(&self, group: &UnitGroup, g: GaussianInt) -> Result<Complex64> {
        let l = group.exponent() as i64;
        Ok(match self.phase(group, g)? {
            Some(p) => e_frac(p as i64, l),
            None => Complex64::new(0.0, 0.0),
        })
    }

    fn check_modulus(&self, group: &UnitGroup) -> Result<()> {
        if group.modulus() != self.modulus || group.orders() != self.generator_orders.as_slice() {
            return Err(Error::MismatchedModulus {
                expected: group.modulus().to_string(),
                got: self.modulus.to_string(),
            });
        }
        Ok(())
    }
}

/// All `Φ(q)` characters modulo `q`, together with the group they live on.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group: UnitGroup,
    pub characters: Vec<MultiplicativeCharacter>,
}

impl CharacterTable {
    pub fn new(q: GaussianInt) -> Result<Self> {
        let group = UnitGroup::new(q)?;
        let orders = group.orders().to_vec();
        let mut characters = Vec::with_capacity(group.order() as usize);
        let mut exps = vec![0u64; orders.len()];
        loop {
            let mut chi = MultiplicativeCharacter {
                modulus: q,
                generator_orders: orders.clone(),
                exponent_vector: exps.clone(),
                proper: false,
            };
            chi.proper = is_proper(&group, &chi)?;
            characters.push(chi);
            if !increment(&mut exps, &orders) {
                break;
            }
        }
        Ok(Self { group, characters })
    }

    pub fn proper(&self) -> impl Iterator<Item = &MultiplicativeCharacter> {
        self.characters.iter().filter(|c| c.proper)
    }
}

pub fn character_table(q: GaussianInt) -> Result<Vec<MultiplicativeCharacter>> {
    Ok(CharacterTable::new(q)?.characters)
}

/// Whether `chi` is not induced from any modulus `b | q` with `N(b) < N(q)`.
///
/// `chi` is induced from `b` exactly when it is trivial on every unit
/// `r ≡ 1 (mod b)`. The trivial character modulo a unit has no such `b` and
/// is therefore proper.
pub fn is_proper(group: &UnitGroup, chi: &MultiplicativeCharacter) -> Result<bool> {
    chi.check_modulus(group)?;
    let q = group.modulus();
    for b in divisors(q)?.into_iter().filter(|b| b.norm() < q.norm()) {
        let witness = group.elements().iter().any(|&r| {
            (r - ONE).is_divisible_by(b) && chi.phase(group, r).ok().flatten().is_some_and(|p| p != 0)
        });
        if !witness {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `τ(χ) = Σ_{r reduced} χ(r)·e(Re(r·conj(q))/N(q))`.
pub fn gauss_sum(group: &UnitGroup, chi: &MultiplicativeCharacter) -> Result<Complex64> {
    chi.check_modulus(group)?;
    let q = group.modulus();
    let mut acc = Complex64::new(0.0, 0.0);
    for &r in group.elements() {
        acc += chi.value(group, r)? * additive_char(q, r, ONE)?;
    }
    Ok(acc)
}

/// Distinct values of a character on the units, as exact phases.
pub fn phase_set(group: &UnitGroup, chi: &MultiplicativeCharacter) -> Result<HashSet<u64>> {
    group
        .elements()
        .iter()
        .map(|&r| Ok(chi.phase(group, r)?.expect("unit")))
        .collect()
}

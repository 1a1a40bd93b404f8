//! Instance-level audit of the nonexistence argument for 3×3 magic squares of
//! squares.
//!
//! Three AP pairs with a common sum are turned into the quantities the
//! argument works with (the `α`, `β` and `N` values, the gap sums `Σp_A`,
//! `Σp_B`, and both sides of the final polynomial identity) and every claimed
//! relation is evaluated exactly. Each relation is reported as holding,
//! failing, or not applicable to the instance; nothing is assumed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ap::{classify_layout, kappa_of, ApError, ApPair, Layout, RootTriple};
use crate::int::Int;
use crate::kappa::{alpha_of, AlphaFraction};
use crate::ratio::Ratio;
use crate::search::{find_square_ap_triples, scan_common_differences, SearchRecord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditError {
    #[error("invalid triple {0:?}: {1}")]
    InvalidTriple(RootTriple, ApError),
    #[error("pair sums differ: {0}, {1}, {2}")]
    SumsDiffer(Int, Int, Int),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Inapplicable,
}

impl Status {
    fn of(ok: bool) -> Status {
        if ok {
            Status::Holds
        } else {
            Status::Fails
        }
    }
}

/// One audited relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(id: impl Into<String>, status: Status, detail: impl Into<String>) -> Check {
        Check {
            id: id.into(),
            status,
            detail: detail.into(),
        }
    }
}

/// `√radicand`, kept only when the radicand is a rational square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaComponent {
    pub name: String,
    pub radicand: Ratio,
    pub value: Option<Ratio>,
}

impl BetaComponent {
    fn new(name: &str, radicand: Ratio) -> BetaComponent {
        let value = radicand.sqrt_exact();
        BetaComponent {
            name: name.to_owned(),
            radicand,
            value,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.value.is_some()
    }
}

/// `N` recovered from a pair's `κ` through both closed forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NCandidates {
    /// `4α_d/(κ-1)`, reading `κ` as `κ₊`.
    pub from_plus: Ratio,
    /// `2α_d(κ-1)`, reading `κ` as `κ₋`.
    pub from_minus: Ratio,
    /// `from_minus` when it is a positive integer, else `from_plus` when that is.
    pub preferred: Option<Int>,
    /// Whether `preferred` solves `N(N+Q) = 8α_d²` with even `Q ≥ 0`.
    pub preferred_is_divisor_solution: bool,
}

fn positive_integer(r: &Ratio) -> Option<Int> {
    r.to_integer().filter(Int::is_positive)
}

fn is_divisor_solution(n: &Int, alpha_d: &Int) -> bool {
    let target = Int::from(8) * alpha_d.square();
    match target.div_exact(n) {
        Some(m) => m >= *n && (&m - n).is_even(),
        None => false,
    }
}

impl NCandidates {
    fn recover(kappa: &Ratio, alpha: &AlphaFraction) -> NCandidates {
        let ad = Ratio::integer(alpha.denom().clone());
        let k1 = kappa - &Ratio::one();
        let from_plus = (&Ratio::integer(4) * &ad).checked_div(&k1).expect("kappa > 1");
        let from_minus = &(&Ratio::integer(2) * &ad) * &k1;
        let preferred = positive_integer(&from_minus).or_else(|| positive_integer(&from_plus));
        let preferred_is_divisor_solution = preferred
            .as_ref()
            .is_some_and(|n| is_divisor_solution(n, alpha.denom()));
        NCandidates {
            from_plus,
            from_minus,
            preferred,
            preferred_is_divisor_solution,
        }
    }

    /// Distinct positive-integer candidates, `κ₋` reading first.
    pub fn integral(&self) -> Vec<(&'static str, Int)> {
        let mut out = Vec::new();
        if let Some(n) = positive_integer(&self.from_minus) {
            out.push(("kappa-minus", n));
        }
        if let Some(n) = positive_integer(&self.from_plus) {
            if out.iter().all(|(_, m)| *m != n) {
                out.push(("kappa-plus", n));
            }
        }
        out
    }
}

/// Everything the argument defines from three equal-sum AP pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationInstance {
    pub triples: [RootTriple; 3],
    pub pairs: [ApPair; 3],
    pub d1: Int,
    pub kappas: [Ratio; 3],
    pub alphas: [AlphaFraction; 3],
    /// Length ratios `n2(P1)/n2(P2)` and `n2(P2)/n2(P3)`.
    pub beta1: Ratio,
    pub beta2: Ratio,
    /// `β1n, β1d, β2n, β2d`.
    pub beta_components: [BetaComponent; 4],
    pub n_vals: [NCandidates; 3],
    /// `¼[(P2¹)² - (P1²)²]`, or its negation when `P2¹ < P1²`.
    pub sum_pa: Int,
    pub sum_pb: Int,
    /// `P2¹ < P1²`, so the gap progressions run from the later pair's start.
    pub primed: bool,
    pub case_label: Option<Layout>,
    /// `D2` when the two chain gaps agree in this order.
    pub d2: Option<i128>,
}

impl DerivationInstance {
    pub fn is_symmetric(&self) -> bool {
        self.triples[0] == self.triples[1] && self.triples[1] == self.triples[2]
    }
}

fn quarter_square_diff(x: u64, y: u64) -> Int {
    let v = Int::from(x).square() - Int::from(y).square();
    v.div_exact(&Int::from(4)).expect("offsets are even")
}

pub fn build_instance(t1: RootTriple, t2: RootTriple, t3: RootTriple) -> Result<DerivationInstance, AuditError> {
    let triples = [t1, t2, t3];
    let mut pairs = Vec::with_capacity(3);
    for t in triples {
        pairs.push(ApPair::try_from(t).map_err(|e| AuditError::InvalidTriple(t, e))?);
    }
    let pairs: [ApPair; 3] = pairs.try_into().expect("three pairs");
    let sums = pairs.map(|p| p.sum());
    if sums[0] != sums[1] || sums[1] != sums[2] {
        let [a, b, c] = sums;
        return Err(AuditError::SumsDiffer(a, b, c));
    }
    let kappas = pairs.map(|p| kappa_of(&p));
    let alphas = kappas
        .clone()
        .map(|k| AlphaFraction::try_from(alpha_of(&k).expect("pair kappa exceeds 1")).expect("alpha is positive"));
    let n2 = pairs.map(|p| Ratio::integer(p.n2()));
    let beta1 = n2[0].checked_div(&n2[1]).expect("nonzero length");
    let beta2 = n2[1].checked_div(&n2[2]).expect("nonzero length");

    let part = |num: &Int, den: &Int| Ratio::from_parts(num.clone(), den.clone()).expect("positive parts");
    let [a1, a2, a3] = &alphas;
    let beta_components = [
        BetaComponent::new("beta1n", part(a2.numer(), a1.numer())),
        BetaComponent::new("beta1d", part(a2.denom(), a1.denom())),
        BetaComponent::new("beta2n", part(a3.numer(), a2.numer())),
        BetaComponent::new("beta2d", part(a3.denom(), a2.denom())),
    ];
    let n_vals = [0, 1, 2].map(|i| NCandidates::recover(&kappas[i], &alphas[i]));

    let [p1, p2, p3] = &pairs;
    let primed = p2.p1() < p1.p2();
    let (sum_pa, sum_pb) = if primed {
        (
            quarter_square_diff(p1.p2(), p2.p1()),
            quarter_square_diff(p2.p2(), p3.p1()),
        )
    } else {
        (
            quarter_square_diff(p2.p1(), p1.p2()),
            quarter_square_diff(p3.p1(), p2.p2()),
        )
    };

    let sq = |r: u64| r as i128 * r as i128;
    let gap_x = sq(t2.a) - sq(t1.c);
    let gap_y = sq(t3.a) - sq(t2.c);

    Ok(DerivationInstance {
        triples,
        pairs,
        d1: sums[0].clone(),
        kappas,
        alphas,
        beta1,
        beta2,
        beta_components,
        n_vals,
        sum_pa,
        sum_pb,
        primed,
        case_label: classify_layout(&pairs),
        d2: (gap_x == gap_y).then_some(gap_x),
    })
}

/// Sum of the progression with the given offset and (possibly negative) length.
fn ap_sum(offset: &Int, len: &Int) -> Int {
    len * &(len + offset)
}

fn half(v: Int) -> Int {
    v.div_exact(&Int::from(2)).expect("offset differences are even")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapLemmaCheck {
    pub case: Option<Layout>,
    /// `Σp_A = Σp_B`; inapplicable without a common `D2`.
    pub equality: Check,
    /// The case's decomposition of `p_A` into a pair progression and a gap
    /// progression, with lengths taken literally.
    pub decomposition: Check,
}

/// The case analysis and the claim `Σp_A = Σp_B`.
pub fn check_gap_lemma(inst: &DerivationInstance) -> GapLemmaCheck {
    let equality = match inst.d2 {
        None => Check::new(
            "gap-sums-equal",
            Status::Inapplicable,
            "no valid D2: the chain gaps differ in this order",
        ),
        Some(d2) => Check::new(
            "gap-sums-equal",
            Status::of(inst.sum_pa == inst.sum_pb),
            format!("D2 = {d2}, sum p_A = {}, sum p_B = {}", inst.sum_pa, inst.sum_pb),
        ),
    };
    GapLemmaCheck {
        case: inst.case_label,
        equality,
        decomposition: check_decomposition(inst),
    }
}

fn check_decomposition(inst: &DerivationInstance) -> Check {
    let id = "gap-decomposition";
    let Some(case) = inst.case_label else {
        return Check::new(
            id,
            Status::Inapplicable,
            "unclassifiable configuration: no case (a), (b) or (c) matches",
        );
    };
    let mut details = Vec::new();
    let mut ok = true;
    for (i, j) in [(0usize, 1usize), (1, 2)] {
        let (p, q) = (&inst.pairs[i], &inst.pairs[j]);
        let [q_start, p_mid, p_end] = [q.p1(), p.p2(), p.p3()].map(Int::from);
        let two = Int::from(2);
        // p_k: the second progression of the earlier pair.
        let pk = ap_sum(&p_mid, &Int::from(p.n2()));
        let (lhs, rhs, what) = match case {
            Layout::Disjoint => {
                let pa = ap_sum(&p_mid, &half(&q_start - &p_mid));
                let gap = ap_sum(&(&p_end + &two), &half(&q_start - &p_end));
                (pa, pk + gap, "sum p_A = sum p_k + sum p_k'")
            }
            Layout::Overlapping => {
                let pa = ap_sum(&p_mid, &half(&q_start - &p_mid));
                let gap = ap_sum(&q_start, &half(&p_end + &two - &q_start));
                (pk, pa + gap, "sum p_k = sum p_A + sum p_k'")
            }
            Layout::Reversed => {
                let pa = ap_sum(&q_start, &half(&p_mid - &q_start));
                let gap = ap_sum(&q_start, &half(&p_end + &two - &q_start));
                (gap, pa + pk, "sum p_k' = sum p_A + sum p_k")
            }
        };
        ok &= lhs == rhs;
        details.push(format!("pairs {}-{}: {what}: {lhs} vs {rhs}", i + 1, j + 1));
    }
    Check::new(
        id,
        Status::of(ok),
        format!("case ({}): {}", case.label(), details.join("; ")),
    )
}

/// One evaluation of the expanded right-hand side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionVariant {
    pub n1: Int,
    pub n1_source: String,
    pub rhs: Ratio,
    /// Expanded right-hand side minus the unexpanded one.
    pub residual: Ratio,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityAudit {
    /// Evaluated from the squared `β` components, which are always rational.
    pub squared_form: Check,
    /// Inapplicable when some `β` component is irrational.
    pub rational_form: Check,
    pub lhs: Option<Ratio>,
    pub rhs: Option<Ratio>,
    /// `lhs - rhs`.
    pub residual: Option<Ratio>,
    pub expansion: Check,
    pub expansion_variants: Vec<ExpansionVariant>,
}

fn int_ratio(v: &Int) -> Ratio {
    Ratio::integer(v.clone())
}

/// Evaluates the polynomial identity and its expansion on one instance.
///
/// With `Bxy = βxy²`, `a = α1` and `N2, N3` the preferred `N` of pairs 2 and 3:
///
/// ```text
/// lhs = N3² B2n B2d (8 B1d² a_d² - N2²)² - N2² (8 B2d² B1d² a_d² - N3²)²
/// rhs = 4 N2² N3² B2n B2d [B1n B1d (a_n - a_d)² - (B1n a_n - B1d a_d)²]
/// ```
///
/// and the expansion replaces the bracket by
/// `(B1d - B1n)[16/N1² B1n a_d⁴ + 24/N1 B1n a_d³ + (13 B1n - B1d) a_d² + 3 N1 B1n a_d + N1²/4 B1n]`.
pub fn audit_identity(inst: &DerivationInstance) -> IdentityAudit {
    let [b1n, b1d, b2n, b2d] = inst.beta_components.clone().map(|c| c.radicand);
    let irrational: Vec<String> = inst
        .beta_components
        .iter()
        .filter(|c| !c.is_rational())
        .map(|c| format!("{}² = {}", c.name, c.radicand))
        .collect();

    let (Some(n2), Some(n3)) = (&inst.n_vals[1].preferred, &inst.n_vals[2].preferred) else {
        let why = "no positive integer N for pair 2 or 3";
        return IdentityAudit {
            squared_form: Check::new("identity", Status::Inapplicable, why),
            rational_form: Check::new("identity-rational", Status::Inapplicable, why),
            lhs: None,
            rhs: None,
            residual: None,
            expansion: Check::new("expansion", Status::Inapplicable, why),
            expansion_variants: Vec::new(),
        };
    };
    let (n2, n3) = (int_ratio(n2).square(), int_ratio(n3).square());
    let an = int_ratio(inst.alphas[0].numer());
    let ad = int_ratio(inst.alphas[0].denom());
    let ad2 = ad.square();
    let k = Ratio::integer;

    let t1 = &(&(&k(8) * &b1d.square()) * &ad2) - &n2;
    let t2 = &(&(&(&k(8) * &b2d.square()) * &b1d.square()) * &ad2) - &n3;
    let lhs = &(&(&(&n3 * &b2n) * &b2d) * &t1.square()) - &(&n2 * &t2.square());

    let front = &(&(&(&k(4) * &n2) * &n3) * &b2n) * &b2d;
    let bracket = &(&(&b1n * &b1d) * &(&an - &ad).square()) - &(&(&b1n * &an) - &(&b1d * &ad)).square();
    let rhs = &front * &bracket;
    let residual = &lhs - &rhs;

    let squared_form = Check::new(
        "identity",
        Status::of(residual.is_zero()),
        format!("lhs = {lhs}, rhs = {rhs}, residual = {residual}"),
    );
    let rational_form = if irrational.is_empty() {
        Check::new(
            "identity-rational",
            squared_form.status,
            "all beta components rational; same value as squared form",
        )
    } else {
        Check::new(
            "identity-rational",
            Status::Inapplicable,
            format!("irrational beta component: {}", irrational.join(", ")),
        )
    };

    let ad3 = &ad2 * &ad;
    let ad4 = ad2.square();
    let expansion_variants: Vec<ExpansionVariant> = inst.n_vals[0]
        .integral()
        .into_iter()
        .map(|(source, n1)| {
            let n = int_ratio(&n1);
            let inner = [
                &(&k(16) * &b1n) * &ad4.checked_div(&n.square()).expect("N1 > 0"),
                &(&k(24) * &b1n) * &ad3.checked_div(&n).expect("N1 > 0"),
                &(&(&k(13) * &b1n) - &b1d) * &ad2,
                &(&(&k(3) * &n) * &b1n) * &ad,
                &n.square().checked_div(&k(4)).unwrap() * &b1n,
            ]
            .iter()
            .fold(Ratio::zero(), |acc, term| &acc + term);
            let rhs30 = &(&front * &(&b1d - &b1n)) * &inner;
            let residual = &rhs30 - &rhs;
            ExpansionVariant {
                n1,
                n1_source: source.to_owned(),
                rhs: rhs30,
                residual,
            }
        })
        .collect();
    let expansion = if expansion_variants.is_empty() {
        Check::new("expansion", Status::Inapplicable, "no positive integer N for pair 1")
    } else {
        let detail: Vec<String> = expansion_variants
            .iter()
            .map(|v| format!("N1 = {} ({}): residual {}", v.n1, v.n1_source, v.residual))
            .collect();
        Check::new(
            "expansion",
            Status::of(expansion_variants.iter().all(|v| v.residual.is_zero())),
            detail.join("; "),
        )
    };

    IdentityAudit {
        squared_form,
        rational_form,
        lhs: Some(lhs),
        rhs: Some(rhs),
        residual: Some(residual),
        expansion,
        expansion_variants,
    }
}

/// One step of the closing argument, evaluated on the instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub claim: String,
    pub holds: bool,
}

/// The five steps from the identity to the coincidence of the pairs.
pub fn audit_conclusion(inst: &DerivationInstance, identity: &IdentityAudit) -> Vec<Link> {
    let b1n = &inst.beta_components[0].radicand;
    let b1d = &inst.beta_components[1].radicand;
    let [p1, p2, p3] = &inst.pairs;
    let link = |claim: &str, holds: bool| Link {
        claim: claim.to_owned(),
        holds,
    };
    vec![
        link("identity", identity.residual.as_ref().is_some_and(Ratio::is_zero)),
        link("beta1d^2 = beta1n^2", b1d == b1n),
        link("beta1 = 1", inst.beta1 == Ratio::one()),
        link("n2(P1) = n2(P2)", p1.n2() == p2.n2()),
        link("P1 = P2 = P3", p1 == p2 && p2 == p3),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub d1: Int,
    pub triples: [RootTriple; 3],
    pub kappas: [Ratio; 3],
    pub alphas: [AlphaFraction; 3],
    pub beta1: Ratio,
    pub beta2: Ratio,
    pub beta_components: [BetaComponent; 4],
    pub n_vals: [NCandidates; 3],
    pub d2: Option<i128>,
    pub case: Option<Layout>,
    pub checks: Vec<Check>,
    pub gap_lemma: GapLemmaCheck,
    pub identity: IdentityAudit,
    pub conclusion: Vec<Link>,
    pub notes: Vec<String>,
}

impl AuditReport {
    /// Every status in the report, in order.
    pub fn statuses(&self) -> Vec<Status> {
        let mut out: Vec<Status> = self.checks.iter().map(|c| c.status).collect();
        out.extend([
            self.gap_lemma.equality.status,
            self.gap_lemma.decomposition.status,
            self.identity.squared_form.status,
            self.identity.rational_form.status,
            self.identity.expansion.status,
        ]);
        out
    }
}

pub fn audit_instance(inst: &DerivationInstance) -> AuditReport {
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    for (i, pair) in inst.pairs.iter().enumerate() {
        let n2 = Ratio::integer(pair.n2());
        let value = inst.alphas[i].as_ratio() * &n2.square();
        let sum = Ratio::integer(pair.sum());
        checks.push(Check::new(
            format!("alpha-length:P{}", i + 1),
            Status::of(value == sum),
            format!(
                "alpha{} · n2² = {} · {}² = {value}, sum = {sum}",
                i + 1,
                inst.alphas[i].as_ratio(),
                pair.n2()
            ),
        ));
    }
    let sums = inst.pairs.map(|p| p.sum());
    checks.push(Check::new(
        "equal-sums",
        Status::of(sums[0] == sums[1] && sums[1] == sums[2]),
        format!("sums {}, {}, {}", sums[0], sums[1], sums[2]),
    ));

    let alpha_ratio = |i: usize, j: usize| {
        inst.alphas[i]
            .as_ratio()
            .checked_div(inst.alphas[j].as_ratio())
            .expect("alpha > 0")
    };
    for (id, beta, ratio) in [
        ("beta1-squared", &inst.beta1, alpha_ratio(1, 0)),
        ("beta2-squared", &inst.beta2, alpha_ratio(2, 1)),
    ] {
        let sq = beta.square();
        checks.push(Check::new(
            id,
            Status::of(sq == ratio),
            format!("beta² = {sq}, alpha ratio = {ratio}"),
        ));
    }

    for c in &inst.beta_components {
        let detail = match &c.value {
            Some(v) => format!("{} = √({}) = {v}", c.name, c.radicand),
            None => format!("{} = √({}) is irrational", c.name, c.radicand),
        };
        checks.push(Check::new(
            format!("rational:{}", c.name),
            Status::of(c.is_rational()),
            detail,
        ));
    }
    if inst.beta_components.iter().any(|c| !c.is_rational()) {
        notes.push("some beta components are square roots of non-square rationals".to_owned());
    }

    for (i, nv) in inst.n_vals.iter().enumerate() {
        let status = match &nv.preferred {
            Some(_) => Status::of(nv.preferred_is_divisor_solution),
            None => Status::Inapplicable,
        };
        let detail = format!(
            "pair {}: 4a_d/(k-1) = {}, 2a_d(k-1) = {}, preferred = {}",
            i + 1,
            nv.from_plus,
            nv.from_minus,
            nv.preferred.as_ref().map_or("none".to_owned(), Int::to_string),
        );
        checks.push(Check::new(format!("n-recovery:P{}", i + 1), status, detail));
        let integral = nv.integral();
        if integral.len() > 1 {
            notes.push(format!(
                "pair {}: both N readings are integral ({}), expansion evaluated for each",
                i + 1,
                integral
                    .iter()
                    .map(|(_, n)| n.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
    }

    let [p1, p2, p3] = &inst.pairs;
    let (pa_from, pa_len, pb_from, pb_len) = if inst.primed {
        (
            p2.p1(),
            (p1.p2() - p2.p1()) / 2,
            p3.p1(),
            p2.p2().checked_sub(p3.p1()).map(|v| v / 2),
        )
    } else {
        (
            p1.p2(),
            p2.p1().saturating_sub(p1.p2()) / 2,
            p2.p2(),
            p3.p1().checked_sub(p2.p2()).map(|v| v / 2),
        )
    };
    let pa_direct = ap_sum(&Int::from(pa_from), &Int::from(pa_len));
    checks.push(Check::new(
        "gap-sum-a",
        Status::of(pa_direct == inst.sum_pa),
        format!(
            "sum p_A = {}{}",
            inst.sum_pa,
            if inst.primed { " (primed)" } else { "" }
        ),
    ));
    match pb_len {
        Some(len) => {
            let pb_direct = ap_sum(&Int::from(pb_from), &Int::from(len));
            checks.push(Check::new(
                "gap-sum-b",
                Status::of(pb_direct == inst.sum_pb),
                format!("sum p_B = {}", inst.sum_pb),
            ));
        }
        None => checks.push(Check::new(
            "gap-sum-b",
            Status::Fails,
            format!(
                "p_B has negative length in the {} orientation",
                if inst.primed { "primed" } else { "forward" }
            ),
        )),
    }

    let gap_lemma = check_gap_lemma(inst);
    if inst.case_label.is_none() {
        notes.push("unclassifiable configuration: none of cases (a), (b), (c) matches".to_owned());
    }
    let identity = audit_identity(inst);
    let conclusion = audit_conclusion(inst, &identity);

    AuditReport {
        d1: inst.d1.clone(),
        triples: inst.triples,
        kappas: inst.kappas.clone(),
        alphas: inst.alphas.clone(),
        beta1: inst.beta1.clone(),
        beta2: inst.beta2.clone(),
        beta_components: inst.beta_components.clone(),
        n_vals: inst.n_vals.clone(),
        d2: inst.d2,
        case: inst.case_label,
        checks,
        gap_lemma,
        identity,
        conclusion,
        notes,
    }
}

const ORDERINGS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// The first ordering of a multiset whose chain gaps agree, else the given order.
fn chain_ordering(ts: [RootTriple; 3]) -> [RootTriple; 3] {
    let sq = |r: u64| r as i128 * r as i128;
    ORDERINGS
        .iter()
        .map(|p| p.map(|i| ts[i]))
        .find(|o| sq(o[1].a) - sq(o[0].c) == sq(o[2].a) - sq(o[1].c))
        .unwrap_or(ts)
}

/// One report per 3-element multiset of the record's triples.
pub fn audit_record(rec: &SearchRecord) -> Vec<AuditReport> {
    let p = &rec.pairs;
    let mut out = Vec::new();
    for i in 0..p.len() {
        for j in i..p.len() {
            for k in j..p.len() {
                let [a, b, c] = chain_ordering([p[i], p[j], p[k]]);
                let inst = build_instance(a, b, c).expect("record triples share a difference");
                out.push(audit_instance(&inst));
            }
        }
    }
    out
}

pub fn audit_sum(d: u64) -> Vec<AuditReport> {
    let pairs = find_square_ap_triples(d);
    if pairs.is_empty() {
        return Vec::new();
    }
    audit_record(&SearchRecord { d1: d, pairs })
}

pub fn audit_max_root(max_root: u64) -> Vec<AuditReport> {
    let records = scan_common_differences(max_root, 1);
    crate::search::map_ordered(&records, audit_record)
        .into_iter()
        .flatten()
        .collect()
}

/// Convenience for a single triple of root triples given in chain order.
pub fn audit_triples(t1: RootTriple, t2: RootTriple, t3: RootTriple) -> Result<AuditReport, AuditError> {
    Ok(audit_instance(&build_instance(t1, t2, t3)?))
}

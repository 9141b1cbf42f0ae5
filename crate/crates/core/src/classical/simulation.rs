//! Step-by-step simulations between the classical and the two-dimensional
//! sequent calculi: a classical rule instance rebuilt as a derivation over
//! its translated premises, and conversely.

use super::{pc_check, to_2pc, to_pc, PcFormula, PcProof, PcRule, PcSequent};
use crate::kernel::{check_assuming, Derivation, RuleParams, RuleTag};
use crate::syntax::{parse_formula, parse_sequent, Context, Dimension, Formula, Sequent};

/// Which calculus supplies the rule instance being simulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simulated {
    /// A classical rule instance, simulated in the two-dimensional calculus.
    Classical,
    /// A two-dimensional rule instance, simulated classically.
    TwoDimensional,
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub name: &'static str,
    pub simulated: Simulated,
    pub pc_hypotheses: Vec<PcSequent>,
    pub pc_proof: PcProof,
    pub npc_hypotheses: Vec<Sequent>,
    pub npc_proof: Derivation,
}

impl Simulation {
    /// Both derivations check against their hypotheses, and the conclusions
    /// correspond under the translation in the simulated direction.
    pub fn check(&self) -> Result<(), String> {
        pc_check(&self.pc_proof, &self.pc_hypotheses)
            .map_err(|e| format!("{}: classical side {e}", self.name))?;
        check_assuming(&self.npc_proof, Dimension::TWO, &self.npc_hypotheses)
            .map_err(|e| format!("{}: two-dimensional side {e}", self.name))?;
        let pc = self.pc_proof.conclusion();
        let npc = self.npc_proof.conclusion();
        let corresponds = npc.turnstile == 1
            && match self.simulated {
                Simulated::Classical => {
                    let side = |xs: &[PcFormula]| Context::from_formulas(xs.iter().map(to_2pc));
                    side(&pc.left) == npc.left && side(&pc.right) == npc.right
                }
                Simulated::TwoDimensional => {
                    let side = |c: &Context| c.iter().map(to_pc).collect::<Result<Vec<_>, _>>();
                    match (side(&npc.left), side(&npc.right)) {
                        (Ok(l), Ok(r)) => PcSequent::new(l, r) == *pc,
                        _ => false,
                    }
                }
            };
        if corresponds {
            Ok(())
        } else {
            Err(format!(
                "{}: conclusions `{pc}` and `{npc}` do not correspond",
                self.name
            ))
        }
    }
}

fn s2(text: &str) -> Sequent {
    parse_sequent(text, Dimension::TWO).expect("literal sequent")
}

fn f2(text: &str) -> Formula {
    parse_formula(text, Dimension::TWO).expect("literal formula")
}

fn pcs(text: &str) -> PcSequent {
    PcSequent::parse(text).expect("literal sequent")
}

fn pcf(text: &str) -> PcFormula {
    text.parse().expect("literal formula")
}

fn step(
    rule: RuleTag,
    params: RuleParams,
    conclusion: &str,
    premises: Vec<Derivation>,
) -> Derivation {
    Derivation::step(rule, params, s2(conclusion), premises)
}

fn pstep(rule: PcRule, formula: Option<&str>, conclusion: &str, premises: Vec<PcProof>) -> PcProof {
    PcProof::step(rule, formula.map(pcf), pcs(conclusion), premises)
}

fn hyp(text: &str) -> Derivation {
    Derivation::Assumption(s2(text))
}

fn phyp(text: &str) -> PcProof {
    PcProof::Hypothesis(pcs(text))
}

/// `∧R` from `⊢ X` and `⊢ Y`, rebuilt with `qR`.
fn and_right() -> Simulation {
    let npc = step(
        RuleTag::QR,
        RuleParams::with_formula(1, f2("q(X, Y, e2)")),
        "|-1 q(X, Y, e2)",
        vec![
            step(
                RuleTag::WeakL,
                RuleParams::with_formula(1, f2("X")),
                "X |-1 Y",
                vec![hyp("|-1 Y")],
            ),
            step(
                RuleTag::WeakR,
                RuleParams::with_formula(2, f2("e1")),
                "X |-2 e1",
                vec![step(
                    RuleTag::Neg1,
                    RuleParams::neg(1, 2, 2, f2("X")),
                    "X |-2",
                    vec![hyp("|-1 X")],
                )],
            ),
        ],
    );
    Simulation {
        name: "and-right",
        simulated: Simulated::Classical,
        pc_hypotheses: vec![pcs("|- X"), pcs("|- Y")],
        pc_proof: pstep(
            PcRule::AndR,
            Some("X & Y"),
            "|- X & Y",
            vec![phyp("|- X"), phyp("|- Y")],
        ),
        npc_hypotheses: vec![s2("|-1 X"), s2("|-1 Y")],
        npc_proof: npc,
    }
}

/// `∧L` from `X, Y ⊢`, rebuilt with `qL`.
fn and_left() -> Simulation {
    let refute_e1 = step(
        RuleTag::Neg1,
        RuleParams::neg(1, 2, 2, f2("e1")),
        "e1 |-2",
        vec![step(RuleTag::Const, RuleParams::i(1), "|-1 e1", vec![])],
    );
    let npc = step(
        RuleTag::QL,
        RuleParams::with_formula(1, f2("q(X, Y, e2)")),
        "q(X, Y, e2) |-1",
        vec![
            hyp("X, Y |-1"),
            step(
                RuleTag::WeakL,
                RuleParams::with_formula(2, f2("X")),
                "X, e1 |-2",
                vec![refute_e1],
            ),
        ],
    );
    Simulation {
        name: "and-left",
        simulated: Simulated::Classical,
        pc_hypotheses: vec![pcs("X, Y |-")],
        pc_proof: pstep(
            PcRule::AndL,
            Some("X & Y"),
            "X & Y |-",
            vec![phyp("X, Y |-")],
        ),
        npc_hypotheses: vec![s2("X, Y |-1")],
        npc_proof: npc,
    }
}

/// `qR` on `q(X, Y, Z)`, rebuilt classically through a cut on `X ∨ ¬X`.
fn q_right() -> Simulation {
    let r = "X & Y | ~X & Z";
    let branch = |lit: &str, conj: &str, other: &str, hyp: &str| {
        pstep(
            PcRule::OrR,
            Some(r),
            &format!("{lit} |- {r}"),
            vec![pstep(
                PcRule::WeakR,
                Some(other),
                &format!("{lit} |- {conj}, {other}"),
                vec![pstep(
                    PcRule::AndR,
                    Some(conj),
                    &format!("{lit} |- {conj}"),
                    vec![
                        pstep(PcRule::Id, None, &format!("{lit} |- {lit}"), vec![]),
                        phyp(hyp),
                    ],
                )],
            )],
        )
    };
    let excluded_middle = pstep(
        PcRule::WeakR,
        Some(r),
        &format!("|- X | ~X, {r}"),
        vec![pstep(
            PcRule::OrR,
            Some("X | ~X"),
            "|- X | ~X",
            vec![pstep(
                PcRule::NotR,
                Some("~X"),
                "|- X, ~X",
                vec![pstep(PcRule::Id, None, "X |- X", vec![])],
            )],
        )],
    );
    let pc = pstep(
        PcRule::Cut,
        Some("X | ~X"),
        &format!("|- {r}"),
        vec![
            pstep(
                PcRule::OrL,
                Some("X | ~X"),
                &format!("X | ~X |- {r}"),
                vec![
                    branch("X", "X & Y", "~X & Z", "X |- Y"),
                    branch("~X", "~X & Z", "X & Y", "~X |- Z"),
                ],
            ),
            excluded_middle,
        ],
    );
    Simulation {
        name: "q-right",
        simulated: Simulated::TwoDimensional,
        pc_hypotheses: vec![pcs("X |- Y"), pcs("~X |- Z")],
        pc_proof: pc,
        npc_hypotheses: vec![s2("X |-1 Y"), s2("X |-2 Z^[2,1]")],
        npc_proof: step(
            RuleTag::QR,
            RuleParams::with_formula(1, f2("q(X, Y, Z)")),
            "|-1 q(X, Y, Z)",
            vec![hyp("X |-1 Y"), hyp("X |-2 Z^[2,1]")],
        ),
    }
}

/// `qL` on `q(X, Y, Z)`, rebuilt classically with `∨L` and `∧L`.
fn q_left() -> Simulation {
    let r = "X & Y | ~X & Z";
    let pc = pstep(
        PcRule::OrL,
        Some(r),
        &format!("{r} |-"),
        vec![
            pstep(
                PcRule::AndL,
                Some("X & Y"),
                "X & Y |-",
                vec![phyp("X, Y |-")],
            ),
            pstep(
                PcRule::AndL,
                Some("~X & Z"),
                "~X & Z |-",
                vec![phyp("~X, Z |-")],
            ),
        ],
    );
    Simulation {
        name: "q-left",
        simulated: Simulated::TwoDimensional,
        pc_hypotheses: vec![pcs("X, Y |-"), pcs("~X, Z |-")],
        pc_proof: pc,
        npc_hypotheses: vec![s2("X, Y |-1"), s2("X, Z^[2,1] |-2")],
        npc_proof: step(
            RuleTag::QL,
            RuleParams::with_formula(1, f2("q(X, Y, Z)")),
            "q(X, Y, Z) |-1",
            vec![hyp("X, Y |-1"), hyp("X, Z^[2,1] |-2")],
        ),
    }
}

/// The four worked simulations: `∧R` and `∧L` in the two-dimensional
/// calculus, `qR` and `qL` classically.
pub fn simulations() -> Vec<Simulation> {
    vec![and_right(), and_left(), q_right(), q_left()]
}

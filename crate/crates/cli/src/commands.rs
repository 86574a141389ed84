//! Command registry: every subcommand implements [`Command`] and is looked up
//! by name at runtime.

use crate::params::Params;
use crate::CliError;
use k3sv::lattice::{fingerprint, is_nondegenerate_span, nondegenerate_reduction};
use k3sv::rational::{is_integer, to_string};
use k3sv::reduction::{dim2_evaluate, reduce_to_hilbert, segre_cross_check_with};
use k3sv::{Engine, SegreParams, VerlindeParams};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

/// Result of one command: its JSON payload and whether every identity it
/// checks held.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub value: Value,
    pub verified: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, verified: true }
    }
}

pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, engine: &Engine, p: &Params) -> Result<Outcome, CliError>;
}

#[derive(Default)]
pub struct CommandRegistry {
    commands: BTreeMap<&'static str, Arc<dyn Command>>,
}

impl CommandRegistry {
    pub fn with_builtins() -> Self {
        let mut reg = CommandRegistry::default();
        reg.register(Arc::new(Segre));
        reg.register(Arc::new(Verlinde));
        reg.register(Arc::new(CheckSv));
        reg.register(Arc::new(Reduce));
        reg.register(Arc::new(Dim2));
        reg.register(Arc::new(SegreDim2));
        reg.register(Arc::new(Fingerprint));
        reg.register(Arc::new(SpanReduce));
        reg
    }

    pub fn register(&mut self, cmd: Arc<dyn Command>) {
        self.commands.insert(cmd.name(), cmd);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Command>> {
        self.commands.get(name).cloned()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn Command>> {
        self.commands.values()
    }
}

pub fn builtin() -> &'static CommandRegistry {
    static REG: OnceLock<CommandRegistry> = OnceLock::new();
    REG.get_or_init(CommandRegistry::with_builtins)
}

fn value(q: &k3sv::Rational) -> Value {
    json!({ "value": to_string(q) })
}

struct Segre;

impl Command for Segre {
    fn name(&self) -> &'static str {
        "segre"
    }
    fn summary(&self) -> &'static str {
        "Segre number [z^n] V^c2 W^c1sq X^2 (--rho --s --c2 --c1sq --n [--order])"
    }
    fn run(&self, engine: &Engine, p: &Params) -> Result<Outcome, CliError> {
        let sp = SegreParams {
            rho: p.nat("rho")?,
            s: p.rational("s")?,
            c2: p.int("c2")?,
            c1sq: p.int("c1sq")?,
            n: p.nat("n")?,
        };
        let q = match p.nat_opt("order")? {
            Some(order) => engine.segre_number_at_order(&sp, order as usize)?,
            None => engine.segre_number(&sp)?,
        };
        Ok(Outcome::ok(value(&q)))
    }
}

struct Verlinde;

impl Command for Verlinde {
    fn name(&self) -> &'static str {
        "verlinde"
    }
    fn summary(&self) -> &'static str {
        "Verlinde number [w^n] G^chiL F (--rho --r --chiL --n [--order])"
    }
    fn run(&self, engine: &Engine, p: &Params) -> Result<Outcome, CliError> {
        let vp = VerlindeParams {
            rho: p.nat("rho")?,
            r: p.int("r")?,
            chi_l: p.int("chiL")?,
            n: p.nat("n")?,
        };
        let q = match p.nat_opt("order")? {
            Some(order) => engine.verlinde_number_at_order(&vp, order as usize)?,
            None => engine.verlinde_number(&vp)?,
        };
        Ok(Outcome::ok(value(&q)))
    }
}

struct CheckSv;

impl Command for CheckSv {
    fn name(&self) -> &'static str {
        "check-sv"
    }
    fn summary(&self) -> &'static str {
        "check the Segre/Verlinde series identities (--rho --r [--order, default 12])"
    }
    fn run(&self, engine: &Engine, p: &Params) -> Result<Outcome, CliError> {
        let order = p.nat_opt("order")?.unwrap_or(12) as usize;
        let rep = engine.check_correspondence(p.nat("rho")?, p.int("r")?, order)?;
        let mut out = json!({
            "g_identity": rep.g_identity_holds,
            "f_identity": rep.f_identity_holds,
        });
        if let Some(k) = rep.first_discrepant_order {
            out["first_discrepant_order"] = json!(k);
        }
        Ok(Outcome { value: out, verified: rep.holds() })
    }
}

struct Reduce;

impl Command for Reduce {
    fn name(&self) -> &'static str {
        "reduce"
    }
    fn summary(&self) -> &'static str {
        "reduce moduli data to Hilbert-scheme data (--rho --n --alpha [--Lsq --u])"
    }
    fn run(&self, _: &Engine, p: &Params) -> Result<Outcome, CliError> {
        let t = reduce_to_hilbert(&p.moduli_data(None)?)?;
        let mut out = json!({
            "beta": t.beta,
            "u_prime": to_string(&t.u_prime),
        });
        if !t.warnings.is_empty() {
            out["warnings"] = json!(t.warnings);
        }
        Ok(Outcome::ok(out))
    }
}

struct Dim2;

impl Command for Dim2 {
    fn name(&self) -> &'static str {
        "dim2"
    }
    fn summary(&self) -> &'static str {
        "closed-form integral on a 2-dimensional moduli space (--rho --alpha [--Lsq --u])"
    }
    fn run(&self, _: &Engine, p: &Params) -> Result<Outcome, CliError> {
        Ok(Outcome::ok(value(&dim2_evaluate(&p.moduli_data(Some(1))?)?)))
    }
}

struct SegreDim2;

impl Command for SegreDim2 {
    fn name(&self) -> &'static str {
        "segre-dim2"
    }
    fn summary(&self) -> &'static str {
        "compare the n = 1 Segre number with the dim2 closed form (--rho --s --c2 --c1sq)"
    }
    fn run(&self, engine: &Engine, p: &Params) -> Result<Outcome, CliError> {
        let s = p.rational("s")?;
        if !is_integer(&s) {
            return Err(CliError::Input("--s: expected an integer rank".into()));
        }
        let agree = segre_cross_check_with(
            engine,
            p.nat("rho")?,
            p.int("s")?,
            p.int("c2")?,
            p.int("c1sq")?,
        )?;
        Ok(Outcome { value: json!({ "agree": agree }), verified: agree })
    }
}

struct Fingerprint;

impl Command for Fingerprint {
    fn name(&self) -> &'static str {
        "fingerprint"
    }
    fn summary(&self) -> &'static str {
        "Gram matrix of v, x_1, ..., x_k (--input with v and xs)"
    }
    fn run(&self, _: &Engine, p: &Params) -> Result<Outcome, CliError> {
        let (v, xs) = p.mukai_input()?;
        let fp = fingerprint(v, xs)?;
        Ok(Outcome::ok(json!({
            "fingerprint": fp,
            "dim_M": to_string(&fp.moduli_dimension()),
        })))
    }
}

struct SpanReduce;

impl Command for SpanReduce {
    fn name(&self) -> &'static str {
        "span-reduce"
    }
    fn summary(&self) -> &'static str {
        "replace xs by classes with the same fingerprint and a non-degenerate span (--input)"
    }
    fn run(&self, _: &Engine, p: &Params) -> Result<Outcome, CliError> {
        let (v, xs) = p.mukai_input()?;
        let ys = nondegenerate_reduction(v, xs)?;
        let same = fingerprint(v, xs)? == fingerprint(v, &ys)?;
        let mut span = vec![v.clone()];
        span.extend(ys.iter().cloned());
        let nondegenerate = is_nondegenerate_span(&span)?;
        Ok(Outcome {
            value: json!({
                "xs": ys,
                "fingerprint_preserved": same,
                "nondegenerate": nondegenerate,
            }),
            verified: same && nondegenerate,
        })
    }
}

//! Resolution of a problem file into core objects.

use std::collections::BTreeMap;

use dglp::exterior::binomial;
use dglp::lie::{check_action, GAction, LieAlgebra, LieError};
use dglp::lie_pair::LiePair;
use dglp::linalg::{format_scalar, Matrix};
use dglp::lp::{u_of, LPModule};
use dglp::module::DgGModule;
use thiserror::Error;

use crate::schema::{
    matrix_to_spec, spec_to_matrix, LieAlgebraSpec, LiePairSpec, LiftSpec, ModuleSpec, ProblemFile,
    StructureConstant, SCHEMA_VERSION,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoadError {
    /// Malformed or inconsistent input; exit code 2.
    #[error("input error: {0}")]
    Input(String),
    /// Well-formed input violating a structural axiom; exit code 1.
    #[error("validation failed")]
    Invalid(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct Problem {
    /// The algebra acting on the modules; the subalgebra for a Lie pair.
    pub lie: LieAlgebra,
    pub modules: BTreeMap<String, DgGModule>,
    pub lp_name: Option<String>,
    /// Present when `alpha` or a Lie pair is given; not necessarily verified.
    pub lp: Option<LPModule>,
    pub pair: Option<LiePair>,
    pub lift: Option<LiftSpec>,
}

fn input(msg: impl Into<String>) -> LoadError {
    LoadError::Input(msg.into())
}

pub fn build_lie(spec: &LieAlgebraSpec) -> Result<LieAlgebra, LoadError> {
    let n = spec.dim;
    if spec.basis.len() != n {
        return Err(input(format!(
            "lie_algebra.basis: {} names for dim {n}",
            spec.basis.len()
        )));
    }
    let mut brackets = Vec::new();
    for (t, sc) in spec.structure_constants.iter().enumerate() {
        if sc.i >= n || sc.j >= n || sc.k >= n {
            return Err(input(format!(
                "lie_algebra.structure_constants[{t}]: index out of range"
            )));
        }
        if sc.i >= sc.j {
            return Err(input(format!(
                "lie_algebra.structure_constants[{t}]: entries are listed only for i < j"
            )));
        }
        brackets.push((sc.i, sc.j, sc.k, sc.value.clone()));
    }
    let names: Vec<&str> = spec.basis.iter().map(String::as_str).collect();
    LieAlgebra::from_brackets(&names, &brackets).map_err(|e| {
        let msg = match e {
            LieError::JacobiViolation { i, j, k, l } => format!(
                "lie_algebra: Jacobi identity fails on ({}, {}, {}) in the {} component",
                names[i], names[j], names[k], names[l]
            ),
            e => format!("lie_algebra: {e}"),
        };
        LoadError::Invalid(vec![msg])
    })
}

fn build_module(lie: &LieAlgebra, name: &str, spec: &ModuleSpec) -> Result<DgGModule, LoadError> {
    let n = lie.dim();
    let field = format!("modules.{name}");
    let (Some(&bot), Some(&top)) = (spec.degrees.keys().next(), spec.degrees.keys().last()) else {
        return Err(input(format!("{field}.degrees: no degrees declared")));
    };
    if spec.degrees.len() as i32 != top - bot + 1 {
        return Err(input(format!(
            "{field}.degrees: degrees must be contiguous"
        )));
    }
    for key in spec
        .actions
        .keys()
        .chain(spec.differentials.keys())
        .chain(spec.names.keys())
    {
        if !spec.degrees.contains_key(key) {
            return Err(input(format!("{field}: entry for undeclared degree {key}")));
        }
    }
    let mut actions = Vec::new();
    for (&q, &d) in &spec.degrees {
        let mats = spec.actions.get(&q).ok_or_else(|| {
            input(format!(
                "{field}.actions.{q}: missing action for declared degree"
            ))
        })?;
        if mats.len() != n {
            return Err(input(format!(
                "{field}.actions.{q}: {} matrices, expected one per basis element ({n})",
                mats.len()
            )));
        }
        let rho = mats
            .iter()
            .enumerate()
            .map(|(i, m)| spec_to_matrix(m, d, d, &format!("{field}.actions.{q}[{i}]")))
            .collect::<Result<Vec<_>, _>>()
            .map_err(LoadError::Input)?;
        actions.push(GAction::new(d, rho));
    }
    let mut diffs = Vec::new();
    for q in bot..top {
        let m = spec.differentials.get(&q).ok_or_else(|| {
            input(format!(
                "{field}.differentials.{q}: missing differential for declared degree"
            ))
        })?;
        diffs.push(
            spec_to_matrix(
                m,
                spec.degrees[&(q + 1)],
                spec.degrees[&q],
                &format!("{field}.differentials.{q}"),
            )
            .map_err(LoadError::Input)?,
        );
    }
    if spec.differentials.contains_key(&top) {
        return Err(input(format!(
            "{field}.differentials.{top}: no differential out of the top degree"
        )));
    }
    let mut violations = Vec::new();
    for (a, q) in actions.iter().zip(bot..) {
        if let Err(e) = check_action(lie, a) {
            violations.push(format!("{field}: action in degree {q}: {e}"));
        }
    }
    if !violations.is_empty() {
        return Err(LoadError::Invalid(violations));
    }
    let m = DgGModule::new(lie, bot, actions, diffs)
        .map_err(|e| LoadError::Invalid(vec![format!("{field}: {e}")]))?;
    if spec.names.is_empty() {
        return Ok(m);
    }
    let names = (bot..=top)
        .map(|q| {
            spec.names.get(&q).cloned().ok_or_else(|| {
                input(format!(
                    "{field}.names.{q}: names must be given for every degree"
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    m.with_names(names)
        .map_err(|e| input(format!("{field}.names: {e}")))
}

fn build_pair(lie: &LieAlgebra, spec: &LiePairSpec) -> Result<LiePair, LoadError> {
    let n = lie.dim();
    if spec.subalgebra_basis.iter().any(|&i| i >= n) {
        return Err(input("lie_pair.subalgebra_basis: index out of range"));
    }
    let p = LiePair::from_basis_indices(lie, &spec.subalgebra_basis)
        .map_err(|e| LoadError::Invalid(vec![format!("lie_pair: {e}")]))?;
    match &spec.splitting {
        None => Ok(p),
        Some(j) => {
            let j = spec_to_matrix(j, n, p.quotient_dim(), "lie_pair.splitting")
                .map_err(LoadError::Input)?;
            p.with_splitting(&j)
                .map_err(|e| LoadError::Invalid(vec![format!("lie_pair.splitting: {e}")]))
        }
    }
}

impl Problem {
    pub fn from_file(f: &ProblemFile) -> Result<Self, LoadError> {
        let ambient = build_lie(&f.lie_algebra)?;
        let pair = f
            .lie_pair
            .as_ref()
            .map(|s| build_pair(&ambient, s))
            .transpose()?;
        // with a Lie pair, modules and alpha live over the subalgebra
        let lie = pair.as_ref().map_or(ambient, |p| p.sub().clone());
        let mut modules = BTreeMap::new();
        for (name, spec) in &f.modules {
            modules.insert(name.clone(), build_module(&lie, name, spec)?);
        }
        let lp_name = match &f.lp_module {
            Some(n) => {
                if !modules.contains_key(n) {
                    return Err(input(format!("lp_module: unknown module {n:?}")));
                }
                Some(n.clone())
            }
            None if modules.contains_key("V") => Some("V".to_string()),
            None if modules.len() == 1 => modules.keys().next().cloned(),
            None => None,
        };
        let mut lp = None;
        if !f.alpha.is_empty() {
            let name = lp_name
                .as_ref()
                .ok_or_else(|| input("alpha: set lp_module to name the module carrying alpha"))?;
            let v = &modules[name];
            if !v.is_nonnegative() {
                return Err(input(format!(
                    "alpha: module {name:?} has negative degrees"
                )));
            }
            let u = u_of(v);
            let n = lie.dim();
            let mut alpha = Vec::new();
            for k in 0..=u {
                let rows = binomial(n, k) * n;
                let cols = v.dim(k as i32);
                alpha.push(match f.alpha.get(&k) {
                    Some(m) => spec_to_matrix(m, rows, cols, &format!("alpha.{k}"))
                        .map_err(LoadError::Input)?,
                    None => Matrix::zeros(rows, cols),
                });
            }
            if let Some(k) = f.alpha.keys().find(|&&k| k > u) {
                return Err(input(format!("alpha.{k}: beyond u = {u}")));
            }
            lp = Some(LPModule::new(v, alpha).map_err(|e| input(format!("alpha: {e}")))?);
        }
        if let Some(p) = &pair {
            let derived = p.lp_module();
            match &lp {
                Some(given) if given != &derived => {
                    return Err(LoadError::Invalid(vec![
                        "lie_pair: given module and alpha differ from the structure induced by the pair".into(),
                    ]))
                }
                Some(_) => {}
                None => {
                    if lp_name.is_some() {
                        return Err(input("lie_pair: alpha must be given when modules are"));
                    }
                    modules.insert("V".into(), derived.module().clone());
                    lp = Some(derived);
                }
            }
        }
        let lp_name = lp_name.or_else(|| lp.as_ref().map(|_| "V".to_string()));
        if let Some(l) = &f.lift {
            for m in [&l.g_module, &l.resolution] {
                if !modules.contains_key(m) {
                    return Err(input(format!("lift: unknown module {m:?}")));
                }
            }
        }
        Ok(Problem {
            lie,
            modules,
            lp_name,
            lp,
            pair,
            lift: f.lift.clone(),
        })
    }

    pub fn lp_module(&self) -> Option<&DgGModule> {
        self.lp_name.as_ref().map(|n| &self.modules[n])
    }
}

pub fn lie_to_spec(lie: &LieAlgebra) -> LieAlgebraSpec {
    let n = lie.dim();
    let mut sc = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let c = lie.c(i, j, k);
                if !num_traits::Zero::is_zero(c) {
                    sc.push(StructureConstant {
                        i,
                        j,
                        k,
                        value: c.clone(),
                    });
                }
            }
        }
    }
    LieAlgebraSpec {
        dim: n,
        basis: lie.names().to_vec(),
        structure_constants: sc,
    }
}

pub fn module_to_spec(v: &DgGModule) -> ModuleSpec {
    let mut spec = ModuleSpec {
        degrees: BTreeMap::new(),
        names: BTreeMap::new(),
        actions: BTreeMap::new(),
        differentials: BTreeMap::new(),
    };
    for q in v.degrees() {
        spec.degrees.insert(q, v.dim(q));
        spec.names.insert(q, v.names(q).to_vec());
        let a = v.action(q).expect("declared degree");
        spec.actions
            .insert(q, a.rhos().iter().map(matrix_to_spec).collect());
        if q < v.top() {
            spec.differentials.insert(q, matrix_to_spec(&v.diff(q)));
        }
    }
    spec
}

/// A problem file carrying `lp` on the module `V`.
pub fn lp_to_file(lp: &LPModule) -> ProblemFile {
    let mut modules = BTreeMap::new();
    modules.insert("V".to_string(), module_to_spec(lp.module()));
    let alpha = lp
        .alphas()
        .iter()
        .enumerate()
        .map(|(k, m)| (k, matrix_to_spec(m)))
        .collect();
    ProblemFile {
        schema_version: SCHEMA_VERSION,
        lie_algebra: lie_to_spec(lp.lie()),
        modules,
        lp_module: Some("V".into()),
        alpha,
        lie_pair: None,
        lift: None,
    }
}

pub fn pair_to_file(p: &LiePair, subalgebra_basis: &[usize]) -> ProblemFile {
    let mut f = lp_to_file(&p.lp_module());
    f.lie_algebra = lie_to_spec(p.ambient());
    f.lie_pair = Some(LiePairSpec {
        subalgebra_basis: subalgebra_basis.to_vec(),
        splitting: Some(matrix_to_spec(p.section())),
    });
    f
}

pub fn describe_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let r: Vec<String> = m.row(i).iter().map(format_scalar).collect();
            format!("[{}]", r.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

//! Subcommand drivers. Each returns a report; the binary only parses flags,
//! prints and writes files.

use std::path::{Path, PathBuf};
use std::time::Instant;

use dglp::atiyah::{atiyah_cocycle, leibniz_on_cohomology};
use dglp::cochain::{d_form_basis, Cochain, Key};
use dglp::cohomology::total_cohomology;
use dglp::exterior::Wedge;
use dglp::kapranov::{default_max_arity, tuples, Kapranov};
use dglp::lie::LieAlgebra;
use dglp::lie_pair::{builtin_sl2, splitting_homotopy};
use dglp::linalg::{format_scalar, kernel, solve_matrix, ComplementRule, Matrix, Scalar};
use dglp::lp::{from_invariant_pairing, killing_form, lift_lp, lp_homotopic, LPModule, OrdinaryLP};
use dglp::module::DgGModule;
use dglp::morphism::{check_resolution, Homotopy};
use num_traits::Zero;

use crate::problem::{describe_matrix, lp_to_file, pair_to_file, LoadError, Problem};
use crate::report::{Report, Section, Status};
use crate::schema::{spec_to_matrix, ProblemFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Sl2Pair,
    Sl2PairAlt,
    Sl2Killing,
}

impl Builtin {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "sl2-pair" => Some(Builtin::Sl2Pair),
            "sl2-pair-alt" => Some(Builtin::Sl2PairAlt),
            "sl2-killing" => Some(Builtin::Sl2Killing),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Sl2Pair => "sl2-pair",
            Builtin::Sl2PairAlt => "sl2-pair-alt",
            Builtin::Sl2Killing => "sl2-killing",
        }
    }

    /// The sl2 pair with the pivot splitting, the same pair with
    /// `j'(b) = f + h`, or `g (x) g` in degree 1 with the Killing pairing.
    pub fn file(self) -> ProblemFile {
        match self {
            Builtin::Sl2Pair => pair_to_file(&builtin_sl2().0, &[0, 1]),
            Builtin::Sl2PairAlt => {
                let p = builtin_sl2().0;
                let alt = p
                    .with_splitting(&Matrix::from_ints(&[&[1], &[0], &[1]]))
                    .expect("f + h splits the quotient");
                pair_to_file(&alt, &[0, 1])
            }
            Builtin::Sl2Killing => {
                let sl2 = LieAlgebra::sl2();
                lp_to_file(
                    &from_invariant_pairing(&sl2, &killing_form(&sl2))
                        .expect("Killing form is invariant"),
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    File(PathBuf),
    Builtin(Builtin),
}

impl Source {
    pub fn label(&self) -> String {
        match self {
            Source::File(p) => p.file_name().map_or_else(
                || p.display().to_string(),
                |n| n.to_string_lossy().into_owned(),
            ),
            Source::Builtin(b) => format!("--builtin {}", b.name()),
        }
    }

    pub fn load(&self) -> Result<ProblemFile, String> {
        match self {
            Source::Builtin(b) => Ok(b.file()),
            Source::File(p) => {
                let text =
                    std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                ProblemFile::parse(&text).map_err(|e| format!("{}: {e}", p.display()))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub max_arity: Option<usize>,
    pub leibniz_n: Option<usize>,
    pub atiyah: bool,
    pub homotopy: Option<Source>,
    pub module: Option<String>,
    pub seed: u64,
    pub random_tuples: usize,
    pub complement: ComplementRule,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_arity: None,
            leibniz_n: None,
            atiyah: false,
            homotopy: None,
            module: None,
            seed: 0,
            random_tuples: 100,
            complement: ComplementRule::Pivot,
            timing: false,
        }
    }
}

/// Result of a subcommand: the report and, for `validate` and `lift`, a
/// problem file to write when `--output` is given.
pub struct Outcome {
    pub report: Report,
    pub output: Option<ProblemFile>,
}

impl Outcome {
    fn new(report: Report) -> Self {
        Outcome {
            report,
            output: None,
        }
    }
}

fn load_problem(cmd: &str, src: &Source) -> Result<(ProblemFile, Problem), Report> {
    let f = src.load().map_err(|e| Report::error(cmd, e))?;
    match Problem::from_file(&f) {
        Ok(p) => Ok((f, p)),
        Err(LoadError::Input(e)) => Err(Report::error(cmd, e)),
        Err(LoadError::Invalid(vs)) => {
            let mut r = Report::new(cmd);
            for v in vs {
                r.fail(v);
            }
            Err(r)
        }
    }
}

fn require_lp<'a>(cmd: &str, p: &'a Problem) -> Result<&'a LPModule, Report> {
    p.lp.as_ref()
        .ok_or_else(|| Report::error(cmd, "no LP structure: give alpha or lie_pair"))
}

fn g_name(lie: &LieAlgebra) -> impl Fn(i32, usize) -> String + '_ {
    move |_, a| lie.names()[a].clone()
}

/// A g-valued form `sum xi^I (x) x_a`.
pub fn render_g_valued(lie: &LieAlgebra, c: &Cochain) -> String {
    c.render(lie.names(), &g_name(lie))
}

fn tuple_label(k: &Kapranov, prefix: &str, t: &[usize]) -> String {
    let m = k.module();
    let names: Vec<String> = t
        .iter()
        .map(|&i| {
            let (q, j) = k.generators()[i];
            m.name(q, j).to_string()
        })
        .collect();
    format!("{prefix}({})", names.join(", "))
}

fn stamp(mut r: Report, start: Instant, opts: &Options) -> Report {
    if opts.timing {
        r.timing_ms = Some(start.elapsed().as_millis());
    }
    r
}

fn lp_violation(p: &Problem, lp: &LPModule) -> Option<String> {
    let e = lp.verify().err()?;
    let v = lp.module();
    let name = v.name(e.k, e.j);
    let g = DgGModule::adjoint(&p.lie);
    Some(format!(
        "alpha: structure equation fails on {name} (degree {}): residual {}",
        e.k,
        e.residual.render_in(&g)
    ))
}

pub fn validate(src: &Source, opts: &Options) -> Outcome {
    let start = Instant::now();
    let cmd = format!("validate {}", src.label());
    let (f, p) = match load_problem(&cmd, src) {
        Ok(x) => x,
        Err(r) => return Outcome::new(stamp(r, start, opts)),
    };
    let mut r = Report::new(&cmd);
    let mut s = Section::new("lie algebra");
    s.row("dim", p.lie.dim().to_string());
    s.row("jacobi", "ok");
    r.sections.push(s);
    let mut s = Section::new("modules");
    for (name, v) in &p.modules {
        let dims: Vec<String> = v.degrees().map(|q| format!("{q}:{}", v.dim(q))).collect();
        s.row(name, format!("ok (degrees {})", dims.join(" ")));
    }
    r.sections.push(s);
    if let Some(lp) = &p.lp {
        let mut s = Section::new("lp structure");
        s.row("module", p.lp_name.clone().unwrap_or_default());
        s.row("u", lp.u().to_string());
        match lp_violation(&p, lp) {
            None => s.row("structure equation", "ok"),
            Some(v) => {
                s.row("structure equation", "fails");
                r.fail(v);
            }
        }
        r.sections.push(s);
    }
    if let Some(pair) = &p.pair {
        let mut s = Section::new("lie pair");
        s.row("quotient dim", pair.quotient_dim().to_string());
        if pair.check_splitting() {
            s.row("splitting", "ok");
        } else {
            s.row("splitting", "fails");
            r.fail("lie_pair.splitting: not a section of the quotient map");
        }
        r.sections.push(s);
    }
    if let Some(l) = &p.lift {
        let mut s = Section::new("lift input");
        match ordinary_from(&p, l) {
            Ok((_, v, _)) => match check_resolution(&v) {
                Ok(()) => s.row("resolution", "ok"),
                Err(e) => {
                    s.row("resolution", "fails");
                    r.fail(format!("lift.resolution: {e}"));
                }
            },
            Err(Ok(e)) => return Outcome::new(stamp(Report::error(&cmd, e), start, opts)),
            Err(Err(e)) => {
                s.row("ordinary lp", "fails");
                r.fail(e);
            }
        }
        r.sections.push(s);
    }
    Outcome {
        report: stamp(r, start, opts),
        output: Some(f),
    }
}

pub fn brackets(src: &Source, opts: &Options) -> Outcome {
    let start = Instant::now();
    let (p, lp, n, mut r) = match lp_command("brackets", src, opts, opts.max_arity) {
        Ok(x) => x,
        Err(r) => return Outcome::new(stamp(r, start, opts)),
    };
    let k = Kapranov::from_lp(&lp);
    let mut s = Section::new("d_tot on forms");
    for a in 0..p.lie.dim() {
        let d: Cochain = d_form_basis(&p.lie, Wedge::single(a))
            .into_iter()
            .map(|(c, w)| (Key::new(w, 0, 0), c))
            .collect();
        let value = if d.is_zero() {
            "0".to_string()
        } else {
            d.render_form(&p.lie)
        };
        s.row(format!("d({}^∨)", p.lie.names()[a]), value);
    }
    r.sections.push(s);
    let mut s = Section::new("R1");
    for (i, img) in k.differential_images().iter().enumerate() {
        s.row(tuple_label(&k, "R1", &[i]), img.render_in(k.module()));
    }
    r.sections.push(s);
    for arity in 2..=n {
        let t = k.table(arity);
        let mut s = Section::new(format!("R{arity}"));
        for (tuple, c) in &t.entries {
            s.row(
                tuple_label(&k, &format!("R{arity}"), tuple),
                c.render_in(k.module()),
            );
        }
        r.sections.push(s);
    }
    if n >= 2 {
        let mut s = Section::new("recursion check");
        match k.recursion_check(n) {
            Ok(()) => s.row(format!("arities 2..{n}"), "agree"),
            Err(m) => {
                s.row(format!("arities 2..{n}"), "disagree");
                r.fail(format!(
                    "{}: closed form {} vs recursion {}",
                    tuple_label(&k, &format!("R{}", m.tuple.len()), &m.tuple),
                    m.closed_form.render_in(k.module()),
                    m.recursion.render_in(k.module())
                ));
            }
        }
        r.sections.push(s);
    }
    Outcome::new(stamp(r, start, opts))
}

/// Loads an LP problem, records an LP violation, and resolves the arity.
fn lp_command(
    name: &str,
    src: &Source,
    opts: &Options,
    arity: Option<usize>,
) -> Result<(Problem, LPModule, usize, Report), Report> {
    let mut cmd = format!("{name} {}", src.label());
    if let Some(n) = arity {
        let flag = if name == "brackets" {
            "--max-arity"
        } else {
            "--leibniz-n"
        };
        cmd.push_str(&format!(" {flag} {n}"));
    }
    if name == "check" {
        if opts.atiyah {
            cmd.push_str(" --atiyah");
        }
        match &opts.homotopy {
            Some(Source::Builtin(b)) => cmd.push_str(&format!(" --homotopy-builtin {}", b.name())),
            Some(h) => cmd.push_str(&format!(" --homotopy {}", h.label())),
            None => {}
        }
        if opts.leibniz_n.is_some() {
            cmd.push_str(&format!(" --seed {}", opts.seed));
        }
    }
    let (_, p) = load_problem(&cmd, src)?;
    let lp = require_lp(&cmd, &p)?.clone();
    let n = arity.unwrap_or_else(|| default_max_arity(&lp));
    let mut r = Report::new(cmd);
    if let Some(v) = lp_violation(&p, &lp) {
        r.fail(v);
    }
    Ok((p, lp, n, r))
}

pub fn check(src: &Source, opts: &Options) -> Outcome {
    let start = Instant::now();
    if opts.leibniz_n.is_none() && !opts.atiyah && opts.homotopy.is_none() {
        return Outcome::new(Report::error(
            format!("check {}", src.label()),
            "choose at least one of --leibniz-n, --atiyah, --homotopy",
        ));
    }
    let (p, lp, _, mut r) = match lp_command("check", src, opts, opts.leibniz_n) {
        Ok(x) => x,
        Err(r) => return Outcome::new(stamp(r, start, opts)),
    };
    if let Some(n) = opts.leibniz_n {
        let k = Kapranov::from_lp(&lp);
        let mut s = Section::new("leibniz identities");
        match k.check_generators(n) {
            Ok(()) => s.row(format!("generator tuples, n = 1..{n}"), "pass"),
            Err(c) => {
                s.row(format!("generator tuples, n = 1..{n}"), "fail");
                let t = &tuples(k.generators().len(), c.n)[c.tuple_index];
                r.fail(format!(
                    "counterexample n = {}: {} residual {}",
                    c.n,
                    tuple_label(&k, "J", t),
                    c.residual.render_in(k.module())
                ));
            }
        }
        let rt = k.random_tuples(opts.seed, opts.random_tuples, n);
        match k.check_tuples(&rt) {
            Ok(()) => s.row(
                format!("{} random tuples, seed {}", rt.len(), opts.seed),
                "pass",
            ),
            Err(c) => {
                s.row(
                    format!("{} random tuples, seed {}", rt.len(), opts.seed),
                    "fail",
                );
                let args: Vec<String> = rt[c.tuple_index]
                    .iter()
                    .map(|a| a.render_in(k.module()))
                    .collect();
                r.fail(format!(
                    "counterexample n = {}: random tuple {} ({}) residual {}",
                    c.n,
                    c.tuple_index,
                    args.join("; "),
                    c.residual.render_in(k.module())
                ));
            }
        }
        r.sections.push(s);
    }
    if opts.atiyah {
        let mut s = Section::new("atiyah cocycle");
        let at = atiyah_cocycle(&lp, lp.module());
        s.row("entries", at.table.len().to_string());
        match at.check_cocycle() {
            Ok(()) => s.row("closed", "pass"),
            Err(res) => {
                s.row("closed", "fail");
                r.fail(format!(
                    "atiyah cocycle not closed: residual has {} terms",
                    res.len()
                ));
            }
        }
        r.sections.push(s);
    }
    if let Some(other) = &opts.homotopy {
        let mut s = Section::new("homotopy");
        let (_, q) = match load_problem(&r.command, other) {
            Ok(x) => x,
            Err(e) => return Outcome::new(stamp(e, start, opts)),
        };
        let Some(lp2) = q.lp.as_ref() else {
            return Outcome::new(Report::error(
                r.command.clone(),
                "other file has no LP structure",
            ));
        };
        if lp2.module() != lp.module() {
            return Outcome::new(Report::error(
                r.command.clone(),
                "LP structures live on different modules",
            ));
        }
        let witness: Option<(Homotopy, &str)> = match (&p.pair, &q.pair) {
            (Some(a), Some(b)) => splitting_homotopy(a, b)
                .ok()
                .map(|h| (h, "analytic h_1 = i^-1(j - j')")),
            _ => lp_homotopic(&lp, lp2).map(|h| (h, "linear solve")),
        };
        match witness {
            Some((h, how)) => {
                s.row("witness", how);
                match h.verify(&lp.as_weak_morphism(), &lp2.as_weak_morphism()) {
                    Ok(()) => s.row("verified", "pass"),
                    Err(e) => {
                        s.row("verified", "fail");
                        r.fail(format!("witness fails: {e}"));
                    }
                }
                let g = DgGModule::adjoint(&p.lie);
                for (q_, j) in lp.module().generators() {
                    let img = h.image(q_, j);
                    if !img.is_zero() {
                        s.row(format!("h({})", lp.module().name(q_, j)), img.render_in(&g));
                    }
                }
                if lp_homotopic(&lp, lp2).is_some() {
                    s.row("independent search", "found");
                } else {
                    s.row("independent search", "none");
                    r.fail("linear search found no homotopy");
                }
            }
            None => {
                s.row("witness", "none");
                r.fail("structures are not homotopic");
            }
        }
        r.sections.push(s);
    }
    Outcome::new(stamp(r, start, opts))
}

fn coords_label(d: i32, x: &[Scalar]) -> String {
    let terms: Vec<String> = x
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("{} H^{d}[{i}]", format_scalar(c)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn cohomology(src: &Source, opts: &Options) -> Outcome {
    let start = Instant::now();
    let mut cmd = format!("cohomology {}", src.label());
    if let Some(m) = &opts.module {
        cmd.push_str(&format!(" --module {m}"));
    }
    let (_, p) = match load_problem(&cmd, src) {
        Ok(x) => x,
        Err(r) => return Outcome::new(stamp(r, start, opts)),
    };
    let name = match opts
        .module
        .clone()
        .or_else(|| p.lp_name.clone())
        .or_else(|| p.modules.keys().next().cloned())
    {
        Some(n) => n,
        None => return Outcome::new(Report::error(cmd, "no module in the file")),
    };
    let Some(v) = p.modules.get(&name) else {
        return Outcome::new(Report::error(cmd, format!("unknown module {name:?}")));
    };
    let mut r = Report::new(&cmd);
    let h = total_cohomology(v);
    let mut s = Section::new("dimensions");
    for (n, d) in h.dims() {
        s.row(format!("H^{n}"), d.to_string());
    }
    r.sections.push(s);
    let mut s = Section::new("representatives");
    for d in &h.degrees {
        for (i, rep) in d.representatives.iter().enumerate() {
            s.row(format!("H^{}[{i}]", d.degree), rep.render_in(v));
        }
    }
    r.sections.push(s);
    if let (Some(lp), true) = (&p.lp, p.lp_name.as_deref() == Some(name.as_str())) {
        if let Some(vi) = lp_violation(&p, lp) {
            r.fail(vi);
        } else {
            let mut s = Section::new("bracket on cohomology");
            match leibniz_on_cohomology(lp) {
                Ok(br) => {
                    for (&((da, i), (db, j)), x) in &br.table {
                        if x.iter().any(|c| !c.is_zero()) {
                            s.row(
                                format!("[H^{da}[{i}], H^{db}[{j}]]"),
                                coords_label(da + db, x),
                            );
                        }
                    }
                    match br.check_leibniz(&br) {
                        Ok(()) => s.row("leibniz identity", "pass"),
                        Err(e) => {
                            s.row("leibniz identity", "fail");
                            r.fail(format!(
                                "leibniz identity fails on (H^{}[{}], H^{}[{}], H^{}[{}])",
                                e.a.0, e.a.1, e.b.0, e.b.1, e.c.0, e.c.1
                            ));
                        }
                    }
                }
                Err(e) => {
                    r.fail(format!(
                        "bracket of H^{}[{}] and H^{}[{}] is not closed",
                        e.a.0, e.a.1, e.b.0, e.b.1
                    ));
                }
            }
            r.sections.push(s);
        }
    }
    Outcome::new(stamp(r, start, opts))
}

/// `(ordinary LP, resolution, inclusion)`; the outer error is an input
/// error, the inner one a validation failure.
fn ordinary_from(
    p: &Problem,
    l: &crate::schema::LiftSpec,
) -> Result<(OrdinaryLP, DgGModule, Matrix), Result<String, String>> {
    let g = &p.modules[&l.g_module];
    if g.bot() != 0 || g.top() != 0 {
        return Err(Ok(format!(
            "lift.g_module: {:?} must be concentrated in degree 0",
            l.g_module
        )));
    }
    let v = p.modules[&l.resolution].clone();
    let n = p.lie.dim();
    let x = spec_to_matrix(&l.x, n, g.dim(0), "lift.x").map_err(Ok)?;
    let iso = spec_to_matrix(&l.inclusion, v.dim(0), g.dim(0), "lift.inclusion").map_err(Ok)?;
    let action = g.action(0).expect("degree 0").clone();
    let ord = OrdinaryLP::new(&p.lie, action, x).map_err(|e| Err(format!("lift.x: {e}")))?;
    Ok((ord, v, iso))
}

pub fn lift(src: &Source, opts: &Options) -> Outcome {
    let start = Instant::now();
    let rule = match opts.complement {
        ComplementRule::Pivot => "pivot",
        ComplementRule::ReversePivot => "reverse",
    };
    let cmd = format!("lift {} --complement {rule}", src.label());
    let (_, p) = match load_problem(&cmd, src) {
        Ok(x) => x,
        Err(r) => return Outcome::new(stamp(r, start, opts)),
    };
    let Some(l) = &p.lift else {
        return Outcome::new(Report::error(cmd, "no lift section in the file"));
    };
    let (ord, v, iso) = match ordinary_from(&p, l) {
        Ok(x) => x,
        Err(Ok(e)) => return Outcome::new(Report::error(cmd, e)),
        Err(Err(e)) => {
            let mut r = Report::new(cmd);
            r.fail(e);
            return Outcome::new(stamp(r, start, opts));
        }
    };
    let mut r = Report::new(&cmd);
    let lp = match lift_lp(&ord, &v, &iso, opts.complement) {
        Ok(lp) => lp,
        Err(e) => {
            r.fail(format!("lift: {e}"));
            return Outcome::new(stamp(r, start, opts));
        }
    };
    let mut s = Section::new("alpha");
    for (q, j) in v.generators() {
        let a = lp.alpha_form(q, j);
        if !a.is_zero() {
            s.row(
                format!("alpha({})", v.name(q, j)),
                render_g_valued(&p.lie, &a),
            );
        }
    }
    r.sections.push(s);
    let mut s = Section::new("checks");
    match lp.verify() {
        Ok(()) => s.row("structure equation", "pass"),
        Err(e) => {
            s.row("structure equation", "fail");
            r.fail(format!(
                "lifted alpha fails on degree {} generator {}",
                e.k, e.j
            ));
        }
    }
    let coords = solve_matrix(&kernel(&v.diff(0)).basis_matrix(), &iso);
    let restricts = coords.is_some_and(|c| lp.h0().mul(&c) == *ord.x());
    s.row("h0 restricts to X", if restricts { "pass" } else { "fail" });
    if !restricts {
        r.fail("H^0 of the lift does not restrict to X");
    }
    s.row("alpha_0", describe_matrix(lp.alpha(0)));
    r.sections.push(s);
    let mut out = lp_to_file(&lp);
    out.modules
        .insert("V".into(), crate::problem::module_to_spec(&v));
    Outcome {
        report: stamp(r, start, opts),
        output: Some(out),
    }
}

pub fn write_output(path: &Path, f: &ProblemFile) -> std::io::Result<()> {
    std::fs::write(path, f.to_canonical())
}

pub fn exit_code(r: &Report) -> i32 {
    r.status.exit_code()
}

pub fn is_pass(r: &Report) -> bool {
    r.status == Status::Pass
}

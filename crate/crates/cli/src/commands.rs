//! One function per subcommand. Each returns a [`Report`] whose exit code
//! is 0 for a produced verdict and 2 for evidence against an asserted
//! assumption, or an [`InputError`] for exit code 1.

use lndkit::conic::{Conic, ConicPoint};
use lndkit::derivation::{Derivation, DerivationError, Nilpotency};
use lndkit::embedding::{build_psi, sample_and_test, EmbeddingError, EmbeddingMap, LocusCertificate, PointVerdict};
use lndkit::fml::{fml_pipeline, DerivationSet, FmlError, PipelineConfig};
use lndkit::poly::Poly;

use crate::manifest::{DerivationEntry, InputError, LndSpec, Manifest};
use crate::report::{Report, Section};

fn names(m: &Manifest) -> Vec<String> {
    m.ring.ring().vars().to_vec()
}

fn mapping(vars: &[String], images: &[Poly]) -> Vec<String> {
    vars.iter().zip(images).map(|(v, p)| format!("{v} -> {p}")).collect()
}

/// The mandatory assumptions block.
pub fn assumptions(m: &Manifest) -> Vec<String> {
    let mut out = Vec::new();
    let flag = |b: bool| if b { "asserted" } else { "not asserted" };
    out.push(format!("{}: K_Delta = k", flag(m.run.trivial_fixed_field)));
    out.push(format!("{}: domain", flag(m.ring.domain_asserted())));
    if m.derivations.is_empty() {
        out.push("lnd(D): no derivations declared".to_string());
    }
    for d in &m.derivations {
        let name = d.derivation.name();
        out.push(match d.derivation.status() {
            Nilpotency::Asserted => format!("asserted: lnd({name})"),
            Nilpotency::Certified(b) => format!("certified: lnd({name}) within orbit bound {b}"),
            Nilpotency::Unknown => format!("unverified: lnd({name}) not certified within orbit bound {}", lnd_bound(d)),
        });
    }
    if let Some(dim) = m.ring.asserted_dimension() {
        out.push(format!("checked: dim B = {dim}"));
    }
    for (poly, over) in &m.irreducible_asserted {
        out.push(format!("asserted-irreducible: {poly} over {over}"));
    }
    out
}

fn lnd_bound(d: &DerivationEntry) -> u32 {
    match d.lnd {
        LndSpec::Certify(n) => n,
        LndSpec::Asserted => 0,
    }
}

fn base(m: &Manifest, command: &str) -> Report {
    Report::new(command, &m.source.label, m.run.seed, assumptions(m))
}

fn input_at(d: &DerivationEntry, e: impl ToString) -> InputError {
    InputError::new(Some(d.location.clone()), e.to_string())
}

fn require_char_zero(m: &Manifest) -> Result<(), InputError> {
    match m.field.characteristic() {
        0 => Ok(()),
        p => Err(InputError::new(Some(m.source.key("field.base")), format!("derivation pipeline unavailable (char {p})"))),
    }
}

/// The working sequence, nonempty, in characteristic zero.
fn sequence(m: &Manifest) -> Result<Vec<&DerivationEntry>, InputError> {
    require_char_zero(m)?;
    let seq = m.sequence();
    if seq.is_empty() {
        return Err(InputError::new(Some(m.source.key("derivations")), "no derivations declared"));
    }
    Ok(seq)
}

fn lnd_sequence(m: &Manifest) -> Result<Vec<&DerivationEntry>, InputError> {
    let seq = sequence(m)?;
    for d in &seq {
        if !d.derivation.status().is_lnd() {
            return Err(input_at(
                d,
                format!(
                    "`{}` is not certified locally nilpotent within orbit bound {}; raise the bound or declare lnd = \"asserted\"",
                    d.derivation.name(),
                    lnd_bound(d)
                ),
            ));
        }
    }
    Ok(seq)
}

fn derivations_of(seq: &[&DerivationEntry]) -> Vec<Derivation> {
    seq.iter().map(|d| d.derivation.clone()).collect()
}

/// Unwraps evidence-class errors out of the core error types.
fn embedding_error(e: &FmlError) -> Option<&EmbeddingError> {
    match e {
        FmlError::Embedding(inner) => Some(inner),
        _ => None,
    }
}

pub fn check_lnd(m: &Manifest) -> Result<Report, InputError> {
    require_char_zero(m)?;
    if m.derivations.is_empty() {
        return Err(InputError::new(Some(m.source.key("derivations")), "no derivations declared"));
    }
    let mut r = base(m, "check-lnd");
    let vars = names(m);
    let mut unverified = Vec::new();
    for d in &m.derivations {
        let der = &d.derivation;
        let bound = match d.lnd {
            LndSpec::Certify(n) => n,
            LndSpec::Asserted => m.run.bound,
        };
        let orbit = der.certify_lnd(bound).map_err(|e| input_at(d, e))?;
        let mut degrees = Vec::new();
        for (i, v) in vars.iter().enumerate() {
            let x = m.ring.ring().var(i);
            degrees.push(match der.degree(&x, bound) {
                Ok(n) => format!("deg({v}) = {n}"),
                Err(DerivationError::DegBoundExceeded { .. }) => format!("deg({v}) > {bound}"),
                Err(DerivationError::ZeroElement) => format!("{v} = 0 in B"),
                Err(e) => return Err(input_at(d, e)),
            });
        }
        let mut s = Section::repeated("derivation");
        s.put("name", der.name())
            .put("values", mapping(&vars, der.values()))
            .put("well_defined", true)
            .put("lnd", d.lnd.to_string())
            .put("orbit_check", match orbit {
                Nilpotency::Certified(b) => format!("every generator killed within {b} steps"),
                _ => format!("inconclusive within {bound} steps"),
            })
            .put("status", der.status().to_string())
            .put("generator_degrees", degrees);
        r.push(s);
        if !der.status().is_lnd() {
            unverified.push(der.name().to_string());
        }
    }
    r.verdict = if unverified.is_empty() {
        format!("all {} derivations are locally nilpotent (certified or asserted)", m.derivations.len())
    } else {
        format!("not certified: {}", unverified.join(", "))
    };
    Ok(r)
}

/// A parameter name not used by the ring or the field.
fn fresh_param(m: &Manifest) -> String {
    let mut taken = names(m);
    taken.extend(m.field.constant_names());
    let mut p = "T".to_string();
    while taken.contains(&p) {
        p.push('_');
    }
    p
}

pub fn exp(m: &Manifest) -> Result<Report, InputError> {
    let seq = lnd_sequence(m)?;
    let mut r = base(m, "exp");
    let vars = names(m);
    let k = &m.field;
    for d in &seq {
        let der = &d.derivation;
        let mut s = Section::repeated("exp");
        s.put("derivation", der.name());
        match &m.run.exp_scalar {
            Some(lam) => {
                let e = der.exp_scalar(lam, m.run.bound).map_err(|e| input_at(d, e))?;
                let inv = der.exp_scalar(&k.neg(lam), m.run.bound).map_err(|e| input_at(d, e))?;
                let round = inv.after(&e).map_err(|e| input_at(d, e))?;
                s.put("parameter", k.format(lam))
                    .put("images", mapping(&vars, e.images()))
                    .put("relations_preserved", true)
                    .put("inverse_is_identity", round.is_identity());
            }
            None => {
                let t = fresh_param(m);
                let e = der.exp_formal(&t, m.run.bound).map_err(|e| input_at(d, e))?;
                s.put("parameter", t).put("images", mapping(&vars, e.images())).put("relations_preserved", true);
            }
        }
        r.push(s);
    }
    r.verdict = format!("exponential computed for {} derivations", seq.len());
    Ok(r)
}

pub fn slice(m: &Manifest) -> Result<Report, InputError> {
    let seq = lnd_sequence(m)?;
    let mut r = base(m, "slice");
    let mut found = 0;
    for d in &seq {
        let der = &d.derivation;
        let mut s = Section::repeated("slice");
        s.put("derivation", der.name());
        match der.find_local_slice(m.run.slice_degree) {
            Ok(sl) => {
                found += 1;
                s.put("s", sl.s.to_string()).put("a", sl.a.to_string());
                if let Some(b) = &m.run.element {
                    let pi = der.dixmier_project(&sl, b, m.run.bound).map_err(|e| input_at(d, e))?;
                    let killed = der.apply(&pi.num).map_err(|e| input_at(d, e))?.is_zero();
                    let exp = der.slice_expansion(&sl, b, m.run.bound).map_err(|e| input_at(d, e))?;
                    let coeffs: Vec<String> = exp
                        .iter()
                        .enumerate()
                        .map(|(n, c)| format!("s^{n}: ({}) / ({})^{}", c.num, sl.a, c.power))
                        .collect();
                    s.put("element", b.to_string())
                        .put("projection", format!("({}) / ({})^{}", pi.num, sl.a, pi.power))
                        .put("projection_in_kernel", killed)
                        .put("expansion_in_s", coeffs);
                }
            }
            Err(DerivationError::NotFound(deg)) => {
                s.put("s", format!("none up to degree {deg}"));
            }
            Err(e) => return Err(input_at(d, e)),
        }
        r.push(s);
    }
    r.verdict = format!("local slices found for {found} of {} derivations", seq.len());
    Ok(r)
}

pub fn kernel(m: &Manifest) -> Result<Report, InputError> {
    let seq = sequence(m)?;
    let set = DerivationSet::new(&m.ring, derivations_of(&seq)).map_err(|e| input_at(seq[0], e))?;
    let basis = set.kernel_intersection_bounded(m.run.kernel_degree).map_err(|e| input_at(seq[0], e))?;
    let mut fixed = true;
    for b in &basis {
        fixed &= set.fixed_by_all(b, m.run.bound).map_err(|e| input_at(seq[0], e))?;
    }
    let mut r = base(m, "kernel");
    let mut s = Section::new("kernel");
    s.put("derivations", m.run.sequence.clone())
        .put("degree_bound", m.run.kernel_degree)
        .put("dimension", basis.len())
        .put("basis", basis.iter().map(|p| p.to_string()).collect::<Vec<_>>())
        .put("fixed_by_all", fixed);
    r.push(s);
    r.verdict = format!(
        "common kernel has dimension {} in degree <= {}",
        basis.len(),
        m.run.kernel_degree
    );
    Ok(r)
}

fn build(m: &Manifest, seq: &[&DerivationEntry]) -> Result<EmbeddingMap, InputError> {
    build_psi(&m.ring, &derivations_of(seq), m.run.bound).map_err(|e| input_at(seq[0], e))
}

fn psi_section(m: &Manifest, psi: &EmbeddingMap, name: &str) -> Section {
    let mut s = Section::new(name);
    s.put("sequence", psi.sequence().to_vec())
        .put("targets", psi.target_vars().to_vec())
        .put("images", mapping(&names(m), psi.images()));
    if let Some(rows) = psi.substitution() {
        s.put("substitution", rows.iter().map(|r| format!("{r:?}")).collect::<Vec<_>>());
    }
    s
}

pub fn psi(m: &Manifest) -> Result<Report, InputError> {
    let seq = lnd_sequence(m)?;
    let psi = build(m, &seq)?;
    let dim = m.ring.dimension().map_err(|e| input_at(seq[0], e))?;
    let rank = psi.generic_rank().map_err(|e| input_at(seq[0], e))?;
    let mut r = base(m, "psi");
    let mut s = psi_section(m, &psi, "psi");
    s.put("dimension", dim).put("generic_rank", rank).put("generic_injective", rank == dim);
    r.push(s);
    r.verdict = if rank == dim {
        format!("generic point injective: Jacobian rank {rank} = dim B")
    } else {
        format!("generic point not injective: Jacobian rank {rank} < dim B = {dim}")
    };
    Ok(r)
}

fn point_section(m: &Manifest, v: &PointVerdict) -> Section {
    let mut s = Section::repeated("point");
    s.put("label", v.point.label.clone()).put("coords", v.point.coords_string());
    if let Some(c) = v.certified {
        s.put("certified", c);
    }
    if let Some(rank) = v.verdict.jacobian_rank {
        s.put("jacobian_rank", rank);
    }
    if let Some(t) = v.verdict.kernel_trivial {
        s.put("kernel_trivial", t);
    }
    s.put("injective", v.verdict.injective).put("images", mapping(&names(m), &v.images));
    s
}

fn evidence(mut r: Report, verdict: String) -> Report {
    r.verdict = verdict;
    r.exit_code = 2;
    r
}

pub fn inject(m: &Manifest) -> Result<Report, InputError> {
    let seq = lnd_sequence(m)?;
    let psi = build(m, &seq)?;
    let points = m.all_points()?;
    let mut r = base(m, "inject");
    r.push(psi_section(m, &psi, "psi"));
    let samples = match sample_and_test(&psi, &points, m.run.method, None) {
        Ok(s) => s,
        Err(e @ EmbeddingError::OracleDisagreement { .. }) => return Ok(evidence(r, format!("oracle disagreement: {e}"))),
        Err(e) => return Err(InputError::new(Some(m.source.key("points")), e.to_string())),
    };
    for v in &samples.points {
        r.push(point_section(m, v));
    }
    let mut s = Section::new("summary");
    s.put("method", m.run.method.to_string()).put("points", samples.points.len()).put("injective", samples.injective());
    r.push(s);
    r.verdict = format!("{} of {} points injective", samples.injective(), samples.points.len());
    Ok(r)
}

fn certificate_sections(r: &mut Report, cert: &LocusCertificate) {
    for e in &cert.entries {
        let mut s = Section::repeated("certificate");
        s.put("variable", e.variable.clone())
            .put("leading_coefficient", e.leading.to_string())
            .put("ideal", e.ideal.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>());
        r.push(s);
    }
    let mut s = Section::new("locus");
    s.put("product", cert.product.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>())
        .put("covers_everything", cert.covers_everything());
    r.push(s);
}

pub fn certify(m: &Manifest) -> Result<Report, InputError> {
    let seq = lnd_sequence(m)?;
    let psi = build(m, &seq)?;
    let mut r = base(m, "certify");
    r.push(psi_section(m, &psi, "psi"));
    let reduced = match psi.reduce_targets(m.run.trials, m.run.seed) {
        Ok(p) => p,
        Err(EmbeddingError::ReductionFailed(n)) => {
            r.verdict = format!("no injective reduction found in {n} trials");
            return Ok(r);
        }
        Err(e) => return Err(input_at(seq[0], e)),
    };
    let rank = reduced.generic_rank().map_err(|e| input_at(seq[0], e))?;
    let dim = m.ring.dimension().map_err(|e| input_at(seq[0], e))?;
    if rank < dim {
        let msg = format!("generic point not injective: Jacobian rank {rank} < dim B = {dim}");
        return Ok(if m.run.trivial_fixed_field { evidence(r, format!("{msg}; evidence against K_Delta = k")) } else {
            r.verdict = msg;
            r
        });
    }
    r.push(psi_section(m, &reduced, "reduced"));
    let cert = match reduced.certify_open_locus() {
        Ok(c) => c,
        Err(e @ EmbeddingError::CertificateUnavailable(_)) => {
            r.verdict = e.to_string();
            return Ok(r);
        }
        Err(e) => return Err(input_at(seq[0], e)),
    };
    certificate_sections(&mut r, &cert);
    let points = m.all_points()?;
    let mut outside = 0;
    for p in &points {
        let ex = cert.excludes(p).map_err(|e| InputError::new(Some(m.source.key("points")), e.to_string()))?;
        outside += ex as usize;
        let mut s = Section::repeated("point");
        s.put("label", p.label.clone()).put("coords", p.coords_string()).put("outside_locus", ex);
        r.push(s);
    }
    r.verdict = format!(
        "certificate with {} nonzero ideals; {outside} of {} points lie outside V(product)",
        cert.entries.len(),
        points.len()
    );
    Ok(r)
}

pub fn pipeline(m: &Manifest) -> Result<Report, InputError> {
    let seq = lnd_sequence(m)?;
    if !m.run.trivial_fixed_field {
        return Err(InputError::new(
            Some(m.source.key("run.assume_trivial_fixed_field")),
            "pipeline requires the assumption K_Delta = k (set assume_trivial_fixed_field = true)",
        ));
    }
    if !m.ring.domain_asserted() {
        return Err(InputError::new(Some(m.source.key("ring.domain")), "pipeline requires domain = true"));
    }
    let set = DerivationSet::new(&m.ring, derivations_of(&seq)).map_err(|e| input_at(seq[0], e))?.assert_trivial_fixed_field();
    let cfg = PipelineConfig {
        max_repeat: m.run.max_repeat,
        degree_bound: m.run.bound,
        trials: m.run.trials,
        seed: m.run.seed,
        method: m.run.method,
        points: m.all_points()?,
    };
    let r = base(m, "pipeline");
    let rep = match fml_pipeline(&set, &cfg) {
        Ok(rep) => rep,
        Err(e) => {
            return match embedding_error(&e) {
                Some(EmbeddingError::GenericNotInjective { rank, dim }) => Ok(evidence(
                    r,
                    format!(
                        "GenericNotInjective: Jacobian rank {rank} < dim B = {dim} after {} repetitions; evidence against K_Delta = k or a too small sequence budget",
                        cfg.max_repeat
                    ),
                )),
                Some(inner @ EmbeddingError::OracleDisagreement { .. }) => {
                    Ok(evidence(r, format!("oracle disagreement: {inner}")))
                }
                Some(inner @ (EmbeddingError::ReductionFailed(_) | EmbeddingError::CertificateUnavailable(_))) => {
                    let mut r = r;
                    r.verdict = format!("incomplete: {inner}");
                    Ok(r)
                }
                _ => Err(input_at(seq[0], e)),
            };
        }
    };
    let mut r = r;
    let mut s = Section::new("pipeline");
    s.put("delta", m.run.sequence.clone())
        .put("attempts", rep.attempts.iter().map(|(k, rank)| format!("repeat {k}: generic rank {rank}")).collect::<Vec<_>>())
        .put("repeat", rep.repeat)
        .put("N", rep.sequence_length)
        .put("n", rep.dimension);
    r.push(s);
    r.push(psi_section(m, &rep.psi, "psi"));
    r.push(psi_section(m, &rep.reduced, "reduced"));
    certificate_sections(&mut r, &rep.certificate);
    for v in &rep.samples.points {
        r.push(point_section(m, v));
    }
    let total = rep.samples.points.len();
    let mut s = Section::new("summary");
    s.put("method", m.run.method.to_string())
        .put("points", total)
        .put("injective", rep.samples.injective())
        .put("certified", rep.samples.certified())
        .put("violations", rep.samples.violations());
    r.push(s);
    if rep.samples.violations() > 0 {
        let bad: Vec<String> = rep
            .samples
            .points
            .iter()
            .filter(|p| p.certified == Some(true) && !p.verdict.injective)
            .map(|p| p.point.label.clone())
            .collect();
        return Ok(evidence(r, format!("certified points failed the injectivity test: {}", bad.join(", "))));
    }
    r.verdict = format!(
        "success: N = {}, n = {}, {} of {total} points embed, {} certified",
        rep.sequence_length,
        rep.dimension,
        rep.samples.injective(),
        rep.samples.certified()
    );
    Ok(r)
}

fn conic_section(p: &ConicPoint, kind: &str) -> Section {
    let mut s = Section::repeated("point");
    s.put("label", p.label.clone())
        .put("kind", kind)
        .put("ideal", p.ideal.clone())
        .put("residue_field", p.field.to_string())
        .put("coords", p.coords_string())
        .put("sqrt_t", p.sqrt_a.as_ref().map_or("none".to_string(), |v| p.field.format(v)))
        .put("locus", if p.in_locus() { "in X_k(B)" } else { "outside X_k(B)" });
    s
}

pub fn xk_conic(m: &Manifest, lambdas: Option<&[String]>) -> Result<Report, InputError> {
    let conic = Conic::new(&m.field)
        .map_err(|e| InputError::new(Some(m.source.key("field")), format!("xk-conic needs the field F2(t): {e}")))?;
    if names(m) != conic.ring().ring().vars() || m.ring.relations() != conic.ring().relations() {
        return Err(InputError::new(
            Some(m.source.key("ring")),
            format!("xk-conic needs vars X, Y with the relation {}", conic.ring().relations()[0]),
        ));
    }
    let lambdas: Vec<String> = lambdas.map(|l| l.to_vec()).unwrap_or_else(|| m.run.conic_lambda.clone());
    let rational: Vec<String> =
        if m.run.conic_rational.is_empty() { vec!["origin".into(), "0".into(), "1".into()] } else { m.run.conic_rational.clone() };
    let mut r = base(m, "xk-conic");
    let mut s = Section::new("conic");
    s.put("relation", conic.ring().relations()[0].to_string())
        .put("a", "t")
        .put("derivations", "derivation pipeline unavailable (char 2)")
        .put("criterion", "a point lies in X_k(B) iff its residue field contains a square root of t");
    r.push(s);
    let (mut inside, mut outside) = (0, 0);
    for l in &lambdas {
        let p = conic
            .lambda_point(l)
            .map_err(|e| InputError::new(Some(m.source.key("run.conic_lambda")), format!("lambda = {l}: {e}")))?;
        if p.in_locus() {
            inside += 1;
        } else {
            outside += 1;
        }
        r.push(conic_section(&p, "m_lambda"));
    }
    for s_text in &rational {
        let arg = (s_text != "origin").then_some(s_text.as_str());
        let p = conic
            .rational_point(arg)
            .map_err(|e| InputError::new(Some(m.source.key("run.conic_rational")), format!("s = {s_text}: {e}")))?;
        if p.in_locus() {
            inside += 1;
        } else {
            outside += 1;
        }
        r.push(conic_section(&p, "rational"));
    }
    let mut s = Section::new("summary");
    s.put("in_locus", inside as usize).put("outside", outside as usize);
    r.push(s);
    r.verdict = format!("{inside} points in X_k(B), {outside} points outside");
    Ok(r)
}

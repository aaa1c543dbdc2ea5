//! The end-to-end monochromatic embedding driver: regularity decomposition,
//! colour and part selection, distance partition, lookahead construction,
//! cross-off-steered injective embedding, and component handling for the
//! bounded-degree mode.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::cn::{cn_injectivize, CnConfig, CnReport};
use super::constants::ConstantsPack;
use super::extensions::{complete_segment, HostView};
use super::hsz::hajnal_szemeredi_partition;
use super::lookahead::{
    build_lookahead, build_segment_lookahead, LookaheadContext, LookaheadTarget,
};
use super::oracle::{cross_off, ChoicePolicy, EmbedderInputs, StepRecord};
use super::EmbedderError;
use crate::bitset::{adjacency_bitsets, Bitset};
use crate::colouring::EdgeColouring;
use crate::graph::{degeneracy_order, shortest_cycle, Graph, OrderedGraph};
use crate::regularity::{
    big_rat, rat_to_f64, select_colour_and_parts, select_parts_for_colour, strengthened_srl,
    BigRat, RegularityDecomposition, Selection, SelectConfig, SrlConfig,
};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbedMode {
    Degenerate,
    MaxDegree,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Coarse part target for the regularity decomposition.
    pub k0: usize,
    pub eps: BigRat,
    /// Constant fine-regularity function f(k).
    pub fine_eps: BigRat,
    pub srl: SrlConfig,
    pub select: SelectConfig,
    /// Colour/clique/seed retries before giving up.
    pub attempts: usize,
    pub audit: bool,
    pub seed: u64,
    /// Extension-enumeration budget per cross-off target.
    pub ext_budget: u64,
    pub hsz_swap_budget: usize,
    pub policy: ChoicePolicy,
    /// Exact edge probability; defaults to the host's empirical density.
    pub p_override: Option<BigRat>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            k0: 4,
            eps: big_rat(1, 2),
            fine_eps: big_rat(1, 4),
            srl: SrlConfig::default(),
            select: SelectConfig::default(),
            attempts: 4,
            audit: false,
            seed: 0,
            ext_budget: 50_000_000,
            hsz_swap_budget: 100_000,
            policy: ChoicePolicy::Seeded,
            p_override: None,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub steps: usize,
    pub w_prime_sizes: Vec<usize>,
    pub w_sizes: Vec<usize>,
    pub c_removed: Vec<usize>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbedReport {
    pub success: bool,
    /// (pattern vertex, host vertex) pairs.
    pub embedding: Vec<(usize, usize)>,
    pub colour: usize,
    pub trajectory: TrajectorySummary,
    pub attempts_used: usize,
    pub warnings: Vec<String>,
    pub cn_reports: Vec<CnReport>,
}

impl EmbedReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "success": self.success,
            "embedding": self.embedding,
            "colour": self.colour,
            "trajectory": {
                "steps": self.trajectory.steps,
                "W_prime_sizes": self.trajectory.w_prime_sizes,
                "W_sizes": self.trajectory.w_sizes,
                "C_sizes": self.trajectory.c_removed,
                "failures": self.trajectory.failures,
            },
            "attempts_used": self.attempts_used,
            "warnings": self.warnings,
        })
    }
}

/// Checks that an embedding is injective and maps every pattern edge onto a
/// host edge of the chosen colour.
pub fn verify_embedding(
    f: &Graph,
    colouring: &EdgeColouring,
    colour: usize,
    embedding: &[(usize, usize)],
) -> Result<(), EmbedderError> {
    let mut image = vec![usize::MAX; f.n()];
    for &(u, h) in embedding {
        if u >= f.n() || image[u] != usize::MAX {
            return Err(EmbedderError::VerificationFailed(format!(
                "vertex {u} missing or doubly mapped"
            )));
        }
        image[u] = h;
    }
    if image.iter().any(|&h| h == usize::MAX) {
        return Err(EmbedderError::VerificationFailed("embedding not total".into()));
    }
    let mut hosts: Vec<usize> = image.clone();
    hosts.sort_unstable();
    hosts.dedup();
    if hosts.len() != f.n() {
        return Err(EmbedderError::VerificationFailed("embedding not injective".into()));
    }
    for (u, v) in f.edges() {
        match colouring.colour(image[u], image[v]) {
            Some(c) if c == colour => {}
            Some(c) => {
                return Err(EmbedderError::VerificationFailed(format!(
                    "edge {u}-{v} mapped to colour {c}, wanted {colour}"
                )))
            }
            None => {
                return Err(EmbedderError::VerificationFailed(format!(
                    "edge {u}-{v} mapped to a non-edge"
                )))
            }
        }
    }
    Ok(())
}

/// Embeds F monochromatically into the coloured host. Degenerate mode runs
/// the whole graph through the lookahead pipeline; maxdegree mode embeds
/// component by component with special branches for complete components and
/// regular components (via a duplicated-segment completion).
pub fn embed_monochromatic(
    f: &OrderedGraph,
    gamma: &Graph,
    colouring: &EdgeColouring,
    cp: &ConstantsPack,
    mode: EmbedMode,
    config: &PipelineConfig,
) -> Result<EmbedReport, EmbedderError> {
    let p_rat = config.p_override.clone().unwrap_or_else(|| empirical_density(gamma));
    let colour_graphs = colouring.colour_subgraphs();
    let decomp = strengthened_srl(
        &colour_graphs,
        &config.eps,
        &|_| config.fine_eps.clone(),
        config.k0,
        &p_rat,
        &config.srl,
    )
    .map_err(EmbedderError::Regularity)
    .map_err(EmbedderError::stage("regularity"))?;

    let gamma_adj = adjacency_bitsets(gamma);
    let colour_adj: Vec<Vec<Bitset>> = colour_graphs.iter().map(adjacency_bitsets).collect();
    let runner = Runner {
        f,
        gamma,
        gamma_adj: &gamma_adj,
        colour_graphs: &colour_graphs,
        colour_adj: &colour_adj,

        cp,
        config,
        decomp: &decomp,
        p: rat_to_f64(&p_rat),
    };

    let mut failures = Vec::new();
    for attempt in 0..config.attempts.max(1) {
        match runner.attempt(mode, attempt) {
            Ok(mut report) => {
                report.attempts_used = attempt + 1;
                report.trajectory.failures = failures;
                verify_embedding(f.graph(), colouring, report.colour, &report.embedding)?;
                return Ok(report);
            }
            Err(AttemptFailure::Soft(msg)) => failures.push(msg),
            Err(AttemptFailure::Hard(e)) => return Err(e),
        }
    }
    Ok(EmbedReport {
        success: false,
        embedding: Vec::new(),
        colour: 0,
        trajectory: TrajectorySummary { failures, ..Default::default() },
        attempts_used: config.attempts.max(1),
        warnings: Vec::new(),
        cn_reports: Vec::new(),
    })
}

fn empirical_density(gamma: &Graph) -> BigRat {
    let n = gamma.n() as i64;
    if n < 2 {
        return big_rat(1, 2);
    }
    let pairs = n * (n - 1) / 2;
    let m = gamma.edge_count() as i64;
    if m == 0 {
        BigRat::new(BigInt::from(1), BigInt::from(pairs.max(1)))
    } else {
        BigRat::new(BigInt::from(m), BigInt::from(pairs))
    }
}

enum AttemptFailure {
    /// Retryable: try the next colour preference / seed.
    Soft(String),
    Hard(EmbedderError),
}

impl From<EmbedderError> for AttemptFailure {
    fn from(e: EmbedderError) -> Self {
        AttemptFailure::Hard(e)
    }
}

impl From<crate::graph::GraphError> for AttemptFailure {
    fn from(e: crate::graph::GraphError) -> Self {
        AttemptFailure::Hard(EmbedderError::Graph(e))
    }
}

struct Runner<'a> {
    f: &'a OrderedGraph,
    gamma: &'a Graph,
    gamma_adj: &'a [Bitset],
    colour_graphs: &'a [Graph],
    colour_adj: &'a [Vec<Bitset>],
    cp: &'a ConstantsPack,
    config: &'a PipelineConfig,
    decomp: &'a RegularityDecomposition,
    p: f64,
}

impl Runner<'_> {
    fn attempt(&self, mode: EmbedMode, attempt: usize) -> Result<EmbedReport, AttemptFailure> {
        let h1 = self.cp.h1_usize()?;
        let d = &self.cp.d;
        let prefer = attempt % self.colour_graphs.len();
        let selection = select_colour_and_parts_with_preference(
            self.decomp,
            h1,
            &[],
            d,
            &self.config.select,
            prefer,
        )
        .map_err(|e| AttemptFailure::Soft(format!("selection: {e}")))?;
        let colour = selection.colour;
        match mode {
            EmbedMode::Degenerate => self.degenerate_attempt(selection, attempt),
            EmbedMode::MaxDegree => self.maxdegree_attempt(colour, attempt),
        }
    }

    fn degenerate_attempt(
        &self,
        selection: Selection,
        attempt: usize,
    ) -> Result<EmbedReport, AttemptFailure> {
        let og = self.checked_order(self.f, self.cp.degeneracy)?;
        let (image, summary, warnings, cn_report) =
            self.embed_piece(&og, None, &selection, &Bitset::new(self.gamma.n()), attempt)?;
        let embedding: Vec<(usize, usize)> =
            (0..og.n()).map(|v| (v, image[v])).collect();
        Ok(EmbedReport {
            success: true,
            embedding,
            colour: selection.colour,
            trajectory: summary,
            attempts_used: 0,
            warnings,
            cn_reports: vec![cn_report],
        })
    }

    fn maxdegree_attempt(
        &self,
        colour: usize,
        attempt: usize,
    ) -> Result<EmbedReport, AttemptFailure> {
        let n = self.f.n();
        let mut image = vec![usize::MAX; n];
        let mut z: Vec<usize> = Vec::new();
        let mut warnings = Vec::new();
        let mut summary = TrajectorySummary::default();
        let mut cn_reports = Vec::new();
        let mut components = self.f.graph().connected_components();
        components.sort_by_key(|c| std::cmp::Reverse(c.len()));
        let seg_len = self.cp.segment_length();
        for comp_vertices in components {
            let sub = self.f.graph().induced(&comp_vertices)?;
            let is_k4 = sub.graph.n() == 4 && sub.graph.edge_count() == 6;
            let regular = !sub.graph.vertices().is_empty()
                && sub
                    .graph
                    .vertices()
                    .all(|v| sub.graph.degree(v) == self.cp.max_degree);
            if is_k4 {
                let quad = self
                    .find_monochromatic_k4(colour, &z)
                    .ok_or_else(|| AttemptFailure::Soft("no colour K4 outside Z".into()))?;
                for (local, host) in quad.iter().enumerate() {
                    image[sub.to_parent[local]] = *host;
                }
                z.extend_from_slice(&quad);
                continue;
            }
            let selection = select_parts_for_colour(
                self.decomp,
                self.cp.h1_usize()?,
                &z,
                &self.cp.d,
                &self.config.select,
                colour,
            )
            .map_err(|e| AttemptFailure::Soft(format!("component selection: {e}")))?;
            let (comp_og, q_local) = if regular {
                let cycle = shortest_cycle(&sub.graph)
                    .ok_or_else(|| AttemptFailure::Soft("regular component without cycle".into()))?;
                let q: Vec<usize> =
                    if cycle.len() <= seg_len { cycle } else { cycle[..seg_len].to_vec() };
                let rest: Vec<usize> =
                    sub.graph.vertices().filter(|v| !q.contains(v)).collect();
                let rest_sub = sub.graph.induced(&rest)?;
                let (rest_og, _) = degeneracy_order(&rest_sub.graph);
                let mut order: Vec<usize> =
                    rest_og.order().iter().map(|&lv| rest_sub.to_parent[lv]).collect();
                order.extend_from_slice(&q);
                (OrderedGraph::new(sub.graph.clone(), order)?, Some(q))
            } else {
                let (og, degen) = degeneracy_order(&sub.graph);
                if degen > self.cp.degeneracy {
                    return Err(AttemptFailure::Hard(EmbedderError::TargetNotDegenerate {
                        claimed: self.cp.degeneracy,
                        actual: degen,
                    }));
                }
                (og, None)
            };
            let z_mask = Bitset::from_slice(self.gamma.n(), &z);
            let (local_image, piece_summary, piece_warnings, cn_report) =
                self.embed_piece(&comp_og, q_local.as_deref(), &selection, &z_mask, attempt)?;
            for local in 0..comp_og.n() {
                image[sub.to_parent[local]] = local_image[local];
            }
            z.extend(local_image.iter().copied());
            warnings.extend(piece_warnings);
            summary.steps += piece_summary.steps;
            summary.w_prime_sizes.extend(piece_summary.w_prime_sizes);
            summary.w_sizes.extend(piece_summary.w_sizes);
            summary.c_removed.extend(piece_summary.c_removed);
            cn_reports.push(cn_report);
        }
        let embedding: Vec<(usize, usize)> = (0..n).map(|v| (v, image[v])).collect();
        Ok(EmbedReport {
            success: true,
            embedding,
            colour,
            trajectory: summary,
            attempts_used: 0,
            warnings,
            cn_reports,
        })
    }

    fn checked_order(
        &self,
        og: &OrderedGraph,
        d: usize,
    ) -> Result<OrderedGraph, EmbedderError> {
        if og.is_degeneracy_order(d) {
            return Ok(og.clone());
        }
        let (fresh, degen) = degeneracy_order(og.graph());
        if degen > d {
            return Err(EmbedderError::TargetNotDegenerate { claimed: d, actual: degen });
        }
        Ok(fresh)
    }

    /// Embeds one ordered piece (a component, or all of F), optionally with
    /// a final segment completed outside the parts.
    fn embed_piece(
        &self,
        comp: &OrderedGraph,
        q: Option<&[usize]>,
        selection: &Selection,
        z_mask: &Bitset,
        attempt: usize,
    ) -> Result<(Vec<usize>, TrajectorySummary, Vec<String>, CnReport), AttemptFailure> {
        let mut warnings = Vec::new();
        let host_n = self.gamma.n();
        let ell1 = self.cp.ell1_usize()?;
        let h0_cap = self.cp.h0_usize()?;
        let mu = self.cp.mu_rat64()?;
        let d_deg = self.cp.degeneracy;
        let h1 = selection.parts.len();

        let classes = hajnal_szemeredi_partition(
            comp.graph(),
            ell1,
            h1,
            self.config.hsz_swap_budget,
        )
        .map_err(|e| AttemptFailure::Soft(format!("distance partition: {e}")))?;
        let class_idx = classes.block_index();
        let phi: Vec<usize> = (0..comp.n()).map(|v| class_idx[v]).collect();

        let prefix_len = comp.n() - q.map(<[usize]>::len).unwrap_or(0);
        let in_q = {
            let mut mask = vec![false; comp.n()];
            if let Some(q) = q {
                for &v in q {
                    mask[v] = true;
                }
            }
            mask
        };
        let mut contexts: Vec<LookaheadContext> = Vec::with_capacity(comp.n());
        for y in 0..comp.n() {
            if in_q[y] {
                contexts.push(empty_context(comp, y));
                continue;
            }
            let ctx = build_lookahead(comp, y, d_deg, mu, ell1, h0_cap)?;
            if !ctx.boundary_disjoint {
                warnings.push(format!("target {y}: boundary meets H0 at this scale"));
            }
            // Injectivity of phi on the lookahead ball, as the setup asks.
            let mut seen = std::collections::HashSet::new();
            seen.insert(phi[y]);
            for &u in &ctx.h1_prime {
                if !seen.insert(phi[u]) {
                    warnings.push(format!("phi collides on H1({y})"));
                    break;
                }
            }
            contexts.push(ctx);
        }

        let part_masks: Vec<Bitset> = selection
            .parts
            .iter()
            .map(|p| Bitset::from_slice(host_n, p))
            .collect();
        let mut allowed_completion = Bitset::full(host_n);
        allowed_completion.subtract(z_mask);
        for mask in &part_masks {
            allowed_completion.subtract(mask);
        }

        let segment_ctx = match q {
            Some(q) => Some(
                build_segment_lookahead(comp, q, d_deg, mu, ell1, h0_cap)
                    .map_err(|e| AttemptFailure::Soft(format!("segment context: {e}")))?,
            ),
            None => None,
        };

        let host = HostView {
            n: host_n,
            gamma_adj: self.gamma_adj,
            g_adj: &self.colour_adj[selection.colour],
            parts: &part_masks,
            part_size: selection.part_size,
        };
        let inputs = EmbedderInputs::new(
            comp,
            host,
            &phi,
            &contexts,
            segment_ctx.as_ref().map(|ctx| (ctx, &allowed_completion)),
            self.cp.kappa_f64(),
            self.cp.d_f64(),
            self.p,
            self.config.ext_budget,
        );

        let steps = std::cell::RefCell::new(Vec::<StepRecord>::new());
        let mut oracle = |image: &mut Vec<usize>, x: usize| {
            let outcome = cross_off(&inputs, image, x)?;
            steps.borrow_mut().push(StepRecord {
                x,
                w_prime_size: outcome.w_prime_size,
                w_size: outcome.w.count(),
                chosen: None,
                cross_offs: outcome.records,
            });
            Ok(outcome.w)
        };
        let cn_config = CnConfig {
            rho: self.cp.rho_f64(),
            p: self.p,
            degeneracy: d_deg,
            max_degree: self.cp.max_degree,
            levels: None,
            step_limit: Some(prefix_len),
            policy: self.config.policy,
            seed: derive_seed(self.config.seed, 0x617474, attempt as u64),
        };
        let (mut image, cn_report) =
            match cn_injectivize(comp, host_n, &mut oracle, &cn_config) {
                Ok(out) => out,
                Err(EmbedderError::ConstructionFails { step, report }) => {
                    return Err(AttemptFailure::Soft(format!(
                        "construction fails at step {step} (occupancy {:?})",
                        report.occupancy
                    )))
                }
                Err(EmbedderError::OccupancyExceeded { level, step, .. }) => {
                    return Err(AttemptFailure::Soft(format!(
                        "level {level} fill schedule exceeded at step {step}"
                    )))
                }
                Err(e) => return Err(AttemptFailure::Hard(e)),
            };

        if let Some(q) = q {
            let mut region = allowed_completion.clone();
            for &h in image.iter() {
                if h != usize::MAX {
                    region.remove(h);
                }
            }
            let placement = complete_segment(&host, comp, q, &image, &region)
                .ok_or_else(|| AttemptFailure::Soft("segment completion failed".into()))?;
            for (qv, hv) in placement {
                image[qv] = hv;
            }
        }

        let steps = steps.into_inner();
        let summary = TrajectorySummary {
            steps: steps.len(),
            w_prime_sizes: steps.iter().map(|s| s.w_prime_size).collect(),
            w_sizes: steps.iter().map(|s| s.w_size).collect(),
            c_removed: steps
                .iter()
                .map(|s| s.cross_offs.iter().map(|c| c.removed).sum())
                .collect(),
            failures: Vec::new(),
        };
        Ok((image, summary, warnings, cn_report))
    }

    fn find_monochromatic_k4(&self, colour: usize, z: &[usize]) -> Option<[usize; 4]> {
        let g = &self.colour_graphs[colour];
        let adj = &self.colour_adj[colour];
        let z_mask = Bitset::from_slice(g.n(), z);
        for u in 0..g.n() {
            if z_mask.contains(u) {
                continue;
            }
            for &v in g.neighbours(u) {
                if v <= u || z_mask.contains(v) {
                    continue;
                }
                let mut common = adj[u].clone();
                common.intersect_with(&adj[v]);
                common.subtract(&z_mask);
                let members: Vec<usize> = common.iter().collect();
                for (i, &w) in members.iter().enumerate() {
                    for &x in &members[i + 1..] {
                        if g.has_edge(w, x) {
                            return Some([u, v, w, x]);
                        }
                    }
                }
            }
        }
        None
    }
}

fn empty_context(comp: &OrderedGraph, y: usize) -> LookaheadContext {
    let empty = comp.graph().induced(&[]).expect("empty subset");
    LookaheadContext {
        target: LookaheadTarget::Vertex(y),
        h1_prime: Vec::new(),
        h1_graph: empty,
        boundary: Vec::new(),
        h0_prime: Vec::new(),
        boundary_disjoint: true,
    }
}

/// Majority-clique selection with a preferred colour tried first.
fn select_colour_and_parts_with_preference(
    decomp: &RegularityDecomposition,
    h1: usize,
    z: &[usize],
    d: &BigRat,
    config: &SelectConfig,
    prefer: usize,
) -> Result<Selection, crate::regularity::RegularityError> {
    match select_parts_for_colour(decomp, h1, z, d, config, prefer) {
        Ok(sel) => Ok(sel),
        Err(_) => select_colour_and_parts(decomp, h1, z, d, config),
    }
}

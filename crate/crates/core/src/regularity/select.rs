//! Picking a colour and host parts from a regularity decomposition: marks
//! bad coarse pairs, finds a bad-free set of parts, a monochromatic clique
//! of parts under majority colouring, then trims fine parts that are
//! irregular, sparse in the chosen colour, or heavy in the avoid set.

use super::{big_int_rat, rat_to_f64, BigRat, RegularityDecomposition, RegularityError};

#[derive(Debug, Clone)]
pub struct SelectConfig {
    /// A fine part is bad when at least this fraction of it lies in Z.
    pub z_fraction: BigRat,
    /// Kept fine parts are trimmed to this fraction of their size.
    pub trim_fraction: BigRat,
    /// Fraction of good fine parts per coarse part actually used; the rest
    /// stay in reserve for completion steps.
    pub use_fraction: BigRat,
}

impl Default for SelectConfig {
    fn default() -> Self {
        SelectConfig {
            z_fraction: super::big_rat(1, 20),
            trim_fraction: super::big_rat(9, 10),
            use_fraction: super::big_rat(1, 2),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub colour: usize,
    /// Indices of the chosen coarse parts.
    pub coarse_indices: Vec<usize>,
    /// The host part V_i for each chosen coarse part, all the same size.
    pub parts: Vec<Vec<usize>>,
    /// Trimmed fine parts making up each V_i.
    pub fine_parts: Vec<Vec<Vec<usize>>>,
    /// Good fine parts held back from each chosen coarse part.
    pub reserve_parts: Vec<Vec<Vec<usize>>>,
    pub part_size: usize,
}

/// Selects a colour chi and h1 coarse parts whose pairwise majority colour
/// is chi with density at least d, then builds the parts V_1..V_h1 from
/// their good fine parts, avoiding Z.
pub fn select_colour_and_parts(
    decomp: &RegularityDecomposition,
    h1: usize,
    z: &[usize],
    d: &BigRat,
    config: &SelectConfig,
) -> Result<Selection, RegularityError> {
    select_impl(decomp, h1, z, d, config, None)
}

/// As [`select_colour_and_parts`] with the colour fixed in advance, for
/// callers that must reuse one colour across several avoid sets.
pub fn select_parts_for_colour(
    decomp: &RegularityDecomposition,
    h1: usize,
    z: &[usize],
    d: &BigRat,
    config: &SelectConfig,
    colour: usize,
) -> Result<Selection, RegularityError> {
    select_impl(decomp, h1, z, d, config, Some(colour))
}

fn select_impl(
    decomp: &RegularityDecomposition,
    h1: usize,
    z: &[usize],
    d: &BigRat,
    config: &SelectConfig,
    forced: Option<usize>,
) -> Result<Selection, RegularityError> {
    let r = decomp.colours;
    let kc = decomp.coarse.len();
    let kf = decomp.fine.len();
    let coarse_lookup = decomp.pair_lookup("coarse");
    let fine_lookup = decomp.pair_lookup("fine");

    // Fine blocks per coarse parent.
    let mut fines_of: Vec<Vec<usize>> = vec![Vec::new(); kc];
    for (fi, &parent) in decomp.fine_parent.iter().enumerate() {
        if parent != usize::MAX {
            fines_of[parent].push(fi);
        }
    }

    // Step 1: mark bad coarse pairs. A pair is bad when, for some colour,
    // too many fine subpairs are irregular or stray from the coarse density.
    let eps_f = rat_to_f64(&decomp.eps);
    let subpair_bound = eps_f.sqrt() * (kf * kf) as f64 / (kc * kc) as f64;
    let mut bad_pair = vec![vec![false; kc]; kc];
    for a in 0..kc {
        for b in (a + 1)..kc {
            'colour: for c in 0..r {
                let coarse_rec = &decomp.coarse_pairs[coarse_lookup[&(a, b, c)]];
                let mut failing = 0usize;
                for &fa in &fines_of[a] {
                    for &fb in &fines_of[b] {
                        if let Some(&idx) = fine_lookup.get(&(fa, fb, c)) {
                            let rec = &decomp.fine_pairs[idx];
                            let off = num_traits::Signed::abs(&(&rec.density
                                - &coarse_rec.density))
                                > decomp.eps;
                            if !rec.regular || off {
                                failing += 1;
                            }
                        }
                    }
                }
                if failing as f64 > subpair_bound {
                    bad_pair[a][b] = true;
                    bad_pair[b][a] = true;
                    break 'colour;
                }
            }
        }
    }

    // Step 2: a bad-free set of coarse parts, greedily dropping the part
    // with the most bad incidences (ties to the higher index, so low indices
    // survive).
    let mut alive: Vec<bool> = vec![true; kc];
    loop {
        let mut worst = None;
        let mut worst_count = 0usize;
        for i in 0..kc {
            if !alive[i] {
                continue;
            }
            let count = (0..kc).filter(|&j| alive[j] && bad_pair[i][j]).count();
            if count > worst_count || (count == worst_count && count > 0) {
                worst = Some(i);
                worst_count = count;
            }
        }
        match worst {
            Some(i) if worst_count > 0 => alive[i] = false,
            _ => break,
        }
    }
    let survivors: Vec<usize> = (0..kc).filter(|&i| alive[i]).collect();

    // Step 3: majority colour per surviving pair, requiring density >= d.
    let majority = |a: usize, b: usize| -> Option<usize> {
        let mut best: Option<(usize, &BigRat)> = None;
        for c in 0..r {
            let rec = &decomp.coarse_pairs[coarse_lookup[&(a.min(b), a.max(b), c)]];
            if best.map(|(_, bd)| &rec.density > bd).unwrap_or(true) {
                best = Some((c, &rec.density));
            }
        }
        let (c, density) = best?;
        if density >= d {
            Some(c)
        } else {
            None
        }
    };

    // Step 4: exhaustive monochromatic clique search over the survivors,
    // colours in ascending order. When no majority-coloured clique exists
    // (possible below the Ramsey threshold at desk scale), fall back to any
    // colour whose pairwise densities clear d on some h1 parts; the final
    // embedding is verified against the colour either way.
    let colour_candidates: Vec<usize> = match forced {
        Some(chi) => vec![chi],
        None => (0..r).collect(),
    };
    let mut chosen: Option<(usize, Vec<usize>)> = None;
    for &chi in &colour_candidates {
        let ok = |a: usize, b: usize| majority(a, b) == Some(chi);
        let mut clique: Vec<usize> = Vec::new();
        if find_clique(&survivors, h1, &ok, 0, &mut clique) {
            chosen = Some((chi, clique));
            break;
        }
    }
    if chosen.is_none() {
        for &chi in &colour_candidates {
            let ok = |a: usize, b: usize| {
                let rec = &decomp.coarse_pairs[coarse_lookup[&(a.min(b), a.max(b), chi)]];
                &rec.density >= d
            };
            let mut clique: Vec<usize> = Vec::new();
            if find_clique(&survivors, h1, &ok, 0, &mut clique) {
                chosen = Some((chi, clique));
                break;
            }
        }
    }
    let (colour, coarse_indices) = chosen.ok_or(RegularityError::NoMonochromaticClique {
        want: h1,
        have: survivors.len(),
    })?;

    // Step 5: mark bad fine parts inside the chosen coarse parts.
    let in_z = {
        let mut mask = vec![false; decomp.fine.n()];
        for &v in z {
            if v < mask.len() {
                mask[v] = true;
            }
        }
        mask
    };
    let fine_bound = eps_f.powf(0.25) * kf as f64 / kc as f64;
    let density_floor = d * super::big_rat(5, 4);
    let mut good_fines: Vec<Vec<usize>> = Vec::new();
    for &ci in &coarse_indices {
        let mut good = Vec::new();
        'fine: for &fi in &fines_of[ci] {
            let block = decomp.fine.block(fi);
            if block.is_empty() {
                continue;
            }
            let z_count = block.iter().filter(|&&v| in_z[v]).count();
            if big_int_rat(z_count) >= &config.z_fraction * big_int_rat(block.len()) {
                continue 'fine;
            }
            for &cj in &coarse_indices {
                if cj == ci {
                    continue;
                }
                let mut failing = 0usize;
                for &fj in &fines_of[cj] {
                    if let Some(&idx) = fine_lookup.get(&(fi, fj, colour)) {
                        let rec = &decomp.fine_pairs[idx];
                        if !rec.regular || rec.density <= density_floor {
                            failing += 1;
                        }
                    }
                }
                if failing as f64 > fine_bound {
                    continue 'fine;
                }
            }
            good.push(fi);
        }
        if good.is_empty() {
            return Err(RegularityError::NoUsableParts);
        }
        good_fines.push(good);
    }

    // Step 6: q used parts per coarse part, the rest reserved.
    let min_good = good_fines.iter().map(Vec::len).min().unwrap_or(0);
    let q = ((rat_to_f64(&config.use_fraction) * min_good as f64).floor() as usize).max(1);

    // Step 7: common trimmed size over every used part.
    let mut t = usize::MAX;
    for good in &good_fines {
        for &fi in good.iter().take(q) {
            let block = decomp.fine.block(fi);
            let z_free = block.iter().filter(|&&v| !in_z[v]).count();
            let trimmed = rat_to_f64(&(&config.trim_fraction * big_int_rat(block.len()))).floor()
                as usize;
            t = t.min(z_free.min(trimmed.max(1)));
        }
    }
    if t == usize::MAX || t == 0 {
        return Err(RegularityError::NoUsableParts);
    }

    let mut parts = Vec::new();
    let mut fine_parts = Vec::new();
    let mut reserve_parts = Vec::new();
    for good in &good_fines {
        let mut cells = Vec::new();
        let mut union = Vec::new();
        for &fi in good.iter().take(q) {
            let cell: Vec<usize> = decomp
                .fine
                .block(fi)
                .iter()
                .copied()
                .filter(|&v| !in_z[v])
                .take(t)
                .collect();
            union.extend_from_slice(&cell);
            cells.push(cell);
        }
        union.sort_unstable();
        parts.push(union);
        fine_parts.push(cells);
        reserve_parts.push(
            good.iter()
                .skip(q)
                .map(|&fi| decomp.fine.block(fi).to_vec())
                .collect(),
        );
    }
    Ok(Selection {
        colour,
        coarse_indices,
        parts,
        fine_parts,
        reserve_parts,
        part_size: q * t,
    })
}

fn find_clique(
    candidates: &[usize],
    want: usize,
    ok: &dyn Fn(usize, usize) -> bool,
    start: usize,
    clique: &mut Vec<usize>,
) -> bool {
    if clique.len() == want {
        return true;
    }
    for idx in start..candidates.len() {
        let v = candidates[idx];
        if candidates.len() - idx < want - clique.len() {
            return false;
        }
        if clique.iter().all(|&u| ok(u, v)) {
            clique.push(v);
            if find_clique(candidates, want, ok, idx + 1, clique) {
                return true;
            }
            clique.pop();
        }
    }
    false
}

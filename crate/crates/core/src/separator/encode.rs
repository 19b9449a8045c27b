//! Compact encoding of a separating polygon as spoke and subchain tokens.
//!
//! A spoke is named by the set of sites touching the critical square at its
//! axis vertex, the rank of that vertex among the vertices of the corridor
//! decomposition of those sites alone, and the site it reaches. A subchain
//! is named by its polygon (or the frame) and a direction; its endpoints are
//! the neighbouring spokes' endpoints, or explicit vertex indices when the
//! whole boundary runs along one site.

use super::planar::Label;
use super::trace::{canonical_path, canonical_ring};
use crate::corridor::{build_corridors, walk, CriticalSquare, FRAME};
use crate::error::{Error, Result};
use crate::geom::{Id, Point, Rect, WeightedPolygon};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Token {
    /// Spoke of vertex `k` of the sites `sites` to its contact on
    /// `sites[j]`, walked away from the vertex when `outward`.
    Spoke { sites: Vec<Id>, k: usize, j: usize, outward: bool },
    /// Boundary of `site` from the previous token's end to the next token's
    /// start, along its counterclockwise order when `ccw`; `full` for a
    /// complete turn.
    Chain { site: Id, ccw: bool, full: bool },
    /// Boundary of `site` between two of its vertices.
    Anchored { site: Id, ccw: bool, from: usize, to: usize },
}

impl Token {
    pub fn is_spoke(&self) -> bool {
        matches!(self, Token::Spoke { .. })
    }
}

const K_BITS: usize = 3;
const J_BITS: usize = 2;

fn bits_for(values: usize) -> usize {
    (usize::BITS - values.saturating_sub(1).leading_zeros()).max(1) as usize
}

/// Polygons that may appear in an encoding, and the frame.
pub struct Universe<'a> {
    polys: Vec<&'a WeightedPolygon>,
    index: HashMap<Id, usize>,
    pub frame: Rect,
    vertex_bits: usize,
    cache: Mutex<HashMap<Vec<Id>, Vec<CriticalSquare>>>,
}

impl<'a> Universe<'a> {
    pub fn new(polys: &'a [WeightedPolygon], frame: &Rect) -> Universe<'a> {
        let mut sorted: Vec<&WeightedPolygon> = polys.iter().collect();
        sorted.sort_by_key(|p| p.id);
        let index = sorted.iter().enumerate().map(|(i, p)| (p.id, i)).collect();
        let most = sorted.iter().map(|p| p.vertices.len()).max().unwrap_or(0).max(4);
        Universe { polys: sorted, index, frame: frame.clone(), vertex_bits: bits_for(most), cache: Mutex::new(HashMap::new()) }
    }

    fn id_bits(&self) -> usize {
        bits_for(self.polys.len() + 1)
    }

    fn site_index(&self, s: Id) -> Result<usize> {
        if s == FRAME {
            return Ok(self.polys.len());
        }
        self.index.get(&s).copied().ok_or_else(|| Error::EncodingFailure(format!("site {s} is not in the universe")))
    }

    fn site_at(&self, i: usize) -> Result<Id> {
        match i.cmp(&self.polys.len()) {
            std::cmp::Ordering::Less => Ok(self.polys[i].id),
            std::cmp::Ordering::Equal => Ok(FRAME),
            _ => Err(Error::EncodingFailure(format!("site index {i} out of range"))),
        }
    }

    /// Counterclockwise boundary of a site.
    pub fn site_loop(&self, s: Id) -> Result<Vec<Point>> {
        if s == FRAME {
            return Ok(self.frame.corners());
        }
        Ok(self.polys[self.site_index(s)?].vertices.clone())
    }

    /// Axis vertices of the decomposition of `sites` alone whose critical
    /// squares touch exactly those sites, sorted by position.
    pub fn vertices_of(&self, sites: &[Id]) -> Result<Vec<CriticalSquare>> {
        if let Some(v) = self.cache.lock().unwrap().get(sites) {
            return Ok(v.clone());
        }
        let mut sample = Vec::new();
        for &s in sites.iter().filter(|&&s| s != FRAME) {
            sample.push(self.polys[self.site_index(s)?].clone());
        }
        let cd = build_corridors(&sample, &self.frame)?;
        let mut out: Vec<CriticalSquare> = cd
            .vertices
            .into_iter()
            .filter(|sq| {
                let mut ids: Vec<Id> = sq.contacts.iter().map(|c| c.0).collect();
                ids.sort_unstable();
                ids == sites
            })
            .collect();
        out.sort_by(|a, b| a.center.cmp(&b.center));
        self.cache.lock().unwrap().insert(sites.to_vec(), out.clone());
        Ok(out)
    }
}

fn spoke_points(u: &Universe, sites: &[Id], k: usize, j: usize, outward: bool) -> Result<Vec<Point>> {
    let vs = u.vertices_of(sites)?;
    let sq = vs.get(k).ok_or_else(|| Error::EncodingFailure(format!("sites {sites:?} have no vertex {k}")))?;
    let site = *sites.get(j).ok_or_else(|| Error::EncodingFailure(format!("contact index {j} out of range")))?;
    let c = sq.contacts.iter().find(|c| c.0 == site).expect("contact sites match").1.clone();
    Ok(if outward { vec![sq.center.clone(), c] } else { vec![c, sq.center.clone()] })
}

fn chain_points(u: &Universe, site: Id, ccw: bool, s: &Point, e: &Point, full: bool) -> Result<Vec<Point>> {
    let mut lp = u.site_loop(site)?;
    if !ccw {
        lp.reverse();
    }
    walk(&lp, s, e, full).map_err(|err| Error::EncodingFailure(err.to_string()))
}

/// Split a labelled loop into tokens.
pub fn tokenize(ring: &[(Point, Label)], squares: &[CriticalSquare], u: &Universe) -> Result<Vec<Token>> {
    let n = ring.len();
    let Some(start) = (0..n).find(|&i| ring[i].1 != ring[(i + n - 1) % n].1) else {
        return anchored(ring, u);
    };
    let mut groups: Vec<(Label, Vec<Point>)> = Vec::new();
    for k in 0..n {
        let i = (start + k) % n;
        match groups.last_mut() {
            Some(g) if g.0 == ring[i].1 => g.1.push(ring[i].0.clone()),
            _ => groups.push((ring[i].1.clone(), vec![ring[i].0.clone()])),
        }
    }
    let m = groups.len();
    let ends: Vec<Point> = (0..m).map(|i| groups[(i + 1) % m].1[0].clone()).collect();
    let by_center: HashMap<&Point, &CriticalSquare> = squares.iter().map(|s| (&s.center, s)).collect();
    let mut out = Vec::with_capacity(m);
    for ((label, mut pts), end) in groups.into_iter().zip(ends) {
        pts.push(end);
        let pts = canonical_path(&pts);
        match label {
            Label::Spoke { vertex, site } => {
                let sq = by_center
                    .get(&vertex)
                    .ok_or_else(|| Error::EncodingFailure(format!("no axis vertex at {vertex:?}")))?;
                let mut sites: Vec<Id> = sq.contacts.iter().map(|c| c.0).collect();
                sites.sort_unstable();
                let c = &sq.contacts.iter().find(|c| c.0 == site).expect("spoke site is a contact").1;
                let outward = if pts == [vertex.clone(), c.clone()] {
                    true
                } else if pts == [c.clone(), vertex.clone()] {
                    false
                } else {
                    return Err(Error::EncodingFailure(format!("boundary uses part of the spoke at {vertex:?}")));
                };
                let k = u
                    .vertices_of(&sites)?
                    .iter()
                    .position(|s| s.center == vertex)
                    .ok_or_else(|| Error::EncodingFailure(format!("vertex {vertex:?} is not a vertex of its sites alone")))?;
                let j = sites.iter().position(|&s| s == site).unwrap();
                if k >= 1 << K_BITS || sites.len() > 4 {
                    return Err(Error::EncodingFailure(format!("vertex {vertex:?} does not fit a spoke token")));
                }
                out.push(Token::Spoke { sites, k, j, outward });
            }
            Label::Chain { site } => {
                let (s, e) = (&pts[0], &pts[pts.len() - 1]);
                let mut found = None;
                'search: for ccw in [true, false] {
                    for full in [false, true] {
                        if full && s != e {
                            continue;
                        }
                        if let Ok(w) = chain_points(u, site, ccw, s, e, full) {
                            if canonical_path(&w) == pts {
                                found = Some(Token::Chain { site, ccw, full });
                                break 'search;
                            }
                        }
                    }
                }
                out.push(found.ok_or_else(|| Error::EncodingFailure(format!("subchain on site {site} is not a boundary walk")))?);
            }
        }
    }
    Ok(out)
}

/// A loop running along a single site, cut at the site's vertices.
fn anchored(ring: &[(Point, Label)], u: &Universe) -> Result<Vec<Token>> {
    let Label::Chain { site } = ring[0].1 else {
        return Err(Error::EncodingFailure("closed boundary made of one spoke".into()));
    };
    let lp = u.site_loop(site)?;
    let at: Vec<usize> = ring.iter().filter_map(|(p, _)| lp.iter().position(|q| q == p)).collect();
    if at.len() < 2 {
        return Err(Error::EncodingFailure(format!("boundary along site {site} meets fewer than two of its vertices")));
    }
    let n = lp.len();
    let ccw = at[1] == (at[0] + 1) % n;
    Ok((0..at.len()).map(|i| Token::Anchored { site, ccw, from: at[i], to: at[(i + 1) % at.len()] }).collect())
}

/// Point path of every token, in boundary order.
pub fn token_paths(tokens: &[Token], u: &Universe) -> Result<Vec<Vec<Point>>> {
    let m = tokens.len();
    let mut parts: Vec<Option<Vec<Point>>> = Vec::with_capacity(m);
    for t in tokens {
        parts.push(match t {
            Token::Spoke { sites, k, j, outward } => Some(spoke_points(u, sites, *k, *j, *outward)?),
            Token::Anchored { site, ccw, from, to } => {
                let lp = u.site_loop(*site)?;
                let (Some(s), Some(e)) = (lp.get(*from), lp.get(*to)) else {
                    return Err(Error::EncodingFailure(format!("vertex index out of range on site {site}")));
                };
                Some(chain_points(u, *site, *ccw, s, e, false)?)
            }
            Token::Chain { .. } => None,
        });
    }
    for i in 0..m {
        if let Token::Chain { site, ccw, full } = &tokens[i] {
            let (prev, next) = (&parts[(i + m - 1) % m], &parts[(i + 1) % m]);
            let (Some(prev), Some(next)) = (prev, next) else {
                return Err(Error::EncodingFailure("subchain without anchoring neighbours".into()));
            };
            let (s, e) = (prev[prev.len() - 1].clone(), next[0].clone());
            parts[i] = Some(chain_points(u, *site, *ccw, &s, &e, *full)?);
        }
    }
    Ok(parts.into_iter().flatten().collect())
}

/// Boundary points of a token sequence.
pub fn decode_ring(tokens: &[Token], u: &Universe) -> Result<Vec<Point>> {
    let pts: Vec<Point> = token_paths(tokens, u)?.into_iter().flatten().collect();
    Ok(canonical_ring(&pts))
}

struct Writer(String);

impl Writer {
    fn put(&mut self, v: usize, bits: usize) {
        for b in (0..bits).rev() {
            self.0.push(if (v >> b) & 1 == 1 { '1' } else { '0' });
        }
    }

    /// Elias gamma code of `v + 1`.
    fn gamma(&mut self, v: usize) {
        let x = v + 1;
        let len = (usize::BITS - x.leading_zeros()) as usize;
        self.put(0, len - 1);
        self.put(x, len);
    }
}

struct Reader<'s> {
    bits: &'s [u8],
    at: usize,
}

impl Reader<'_> {
    fn get(&mut self, bits: usize) -> Result<usize> {
        let mut v = 0usize;
        for _ in 0..bits {
            let b = *self.bits.get(self.at).ok_or_else(|| Error::EncodingFailure("bit string ends early".into()))?;
            v = (v << 1)
                | match b {
                    b'0' => 0,
                    b'1' => 1,
                    _ => return Err(Error::EncodingFailure("bit string has a character other than 0 and 1".into())),
                };
            self.at += 1;
        }
        Ok(v)
    }

    fn gamma(&mut self) -> Result<usize> {
        let mut zeros = 0;
        while self.get(1)? == 0 {
            zeros += 1;
            if zeros > 60 {
                return Err(Error::EncodingFailure("malformed length prefix".into()));
            }
        }
        let rest = self.get(zeros)?;
        Ok(((1 << zeros) | rest) - 1)
    }
}

/// Bit string of a token sequence: a gamma-coded count, then per token a
/// 2-bit tag and its fields.
pub fn encode_tokens(tokens: &[Token], u: &Universe) -> Result<String> {
    let ib = u.id_bits();
    let mut w = Writer(String::new());
    w.gamma(tokens.len());
    for t in tokens {
        match t {
            Token::Spoke { sites, k, j, outward } => {
                w.put(0, 2);
                w.put(usize::from(sites.len() == 4), 1);
                for &s in sites {
                    w.put(u.site_index(s)?, ib);
                }
                w.put(*k, K_BITS);
                w.put(*j, J_BITS);
                w.put(usize::from(*outward), 1);
            }
            Token::Chain { site, ccw, full } => {
                w.put(1, 2);
                w.put(u.site_index(*site)?, ib);
                w.put(usize::from(*ccw), 1);
                w.put(usize::from(*full), 1);
            }
            Token::Anchored { site, ccw, from, to } => {
                w.put(2, 2);
                w.put(u.site_index(*site)?, ib);
                w.put(usize::from(*ccw), 1);
                w.put(*from, u.vertex_bits);
                w.put(*to, u.vertex_bits);
            }
        }
    }
    Ok(w.0)
}

pub fn decode_tokens(bits: &str, u: &Universe) -> Result<Vec<Token>> {
    let ib = u.id_bits();
    let mut r = Reader { bits: bits.as_bytes(), at: 0 };
    let n = r.gamma()?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let t = match r.get(2)? {
            0 => {
                let count = if r.get(1)? == 1 { 4 } else { 3 };
                let mut sites = Vec::with_capacity(count);
                for _ in 0..count {
                    sites.push(u.site_at(r.get(ib)?)?);
                }
                let (k, j, outward) = (r.get(K_BITS)?, r.get(J_BITS)?, r.get(1)? == 1);
                Token::Spoke { sites, k, j, outward }
            }
            1 => Token::Chain { site: u.site_at(r.get(ib)?)?, ccw: r.get(1)? == 1, full: r.get(1)? == 1 },
            2 => Token::Anchored {
                site: u.site_at(r.get(ib)?)?,
                ccw: r.get(1)? == 1,
                from: r.get(u.vertex_bits)?,
                to: r.get(u.vertex_bits)?,
            },
            _ => return Err(Error::EncodingFailure("unknown token tag".into())),
        };
        out.push(t);
    }
    if r.at != bits.len() {
        return Err(Error::EncodingFailure(format!("{} trailing bits", bits.len() - r.at)));
    }
    Ok(out)
}

/// Encode and check that decoding reproduces `boundary` exactly.
pub fn encode(tokens: &[Token], boundary: &[Point], u: &Universe) -> Result<String> {
    let bits = encode_tokens(tokens, u)?;
    let back = decode(&bits, u)?;
    if back != canonical_ring(boundary) {
        return Err(Error::EncodingFailure("decoded boundary differs from the traced one".into()));
    }
    Ok(bits)
}

/// Boundary of an encoded separating polygon.
pub fn decode(bits: &str, u: &Universe) -> Result<Vec<Point>> {
    decode_ring(&decode_tokens(bits, u)?, u)
}

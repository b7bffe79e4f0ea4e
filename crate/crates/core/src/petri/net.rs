use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetError {
    #[error("duplicate place or transition id '{0}'")]
    DuplicateId(String),
    #[error("arc weight must be positive (arc {0})")]
    ZeroWeight(String),
    #[error("place '{0}' belongs to more than one unit")]
    PlaceInTwoUnits(String),
    #[error("place '{0}' belongs to no unit")]
    PlaceWithoutUnit(String),
}

/// A weighted arc endpoint: `weight` tokens on `place`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub place: usize,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceInfo {
    pub name: String,
    /// Unit holding this place, when the net carries NUPN units.
    pub unit: Option<usize>,
    /// 1-based code of this place inside its unit; 0 when there is no unit.
    pub unit_code: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionInfo {
    pub name: String,
    /// Input arcs, sorted by place.
    pub pre: Vec<Arc>,
    /// Output arcs, sorted by place.
    pub post: Vec<Arc>,
    /// Nonzero net token change per place, sorted by place.
    pub effect: Vec<(usize, i64)>,
}

/// A NUPN unit: a group of places of which at most one is marked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitInfo {
    pub name: String,
    pub places: Vec<usize>,
}

/// An immutable place/transition net.
///
/// Place and transition indices are dense and 0-based. The transition index
/// order is the total order used by the dynamic fireset.
#[derive(Debug, Clone)]
pub struct PetriNet {
    pub(crate) places: Vec<PlaceInfo>,
    pub(crate) transitions: Vec<TransitionInfo>,
    pub(crate) initial: Vec<u32>,
    pub(crate) units: Option<Vec<UnitInfo>>,
    pub(crate) declared_safe: bool,
    place_index: HashMap<String, usize>,
    transition_index: HashMap<String, usize>,
}

impl PetriNet {
    pub fn places(&self) -> &[PlaceInfo] {
        &self.places
    }

    pub fn transitions(&self) -> &[TransitionInfo] {
        &self.transitions
    }

    pub fn num_places(&self) -> usize {
        self.places.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial_marking(&self) -> &[u32] {
        &self.initial
    }

    pub fn units(&self) -> Option<&[UnitInfo]> {
        self.units.as_deref()
    }

    /// Whether the input declared the net 1-safe (NUPN `safe="true"`).
    pub fn declared_safe(&self) -> bool {
        self.declared_safe
    }

    pub fn place_by_name(&self, name: &str) -> Option<usize> {
        self.place_index.get(name).copied()
    }

    pub fn transition_by_name(&self, name: &str) -> Option<usize> {
        self.transition_index.get(name).copied()
    }

    /// W(p, t): tokens consumed from `place` by `t`.
    pub fn input_weight(&self, place: usize, t: usize) -> u32 {
        weight_of(&self.transitions[t].pre, place)
    }

    /// W(t, p): tokens produced into `place` by `t`.
    pub fn output_weight(&self, t: usize, place: usize) -> u32 {
        weight_of(&self.transitions[t].post, place)
    }

    /// Incidence entry C[p][t] = W(t,p) - W(p,t).
    pub fn incidence(&self, place: usize, t: usize) -> i64 {
        i64::from(self.output_weight(t, place)) - i64::from(self.input_weight(place, t))
    }

    /// Drops the unit structure, keeping everything else.
    pub fn without_units(&self) -> PetriNet {
        let mut net = self.clone();
        net.units = None;
        for p in &mut net.places {
            p.unit = None;
            p.unit_code = 0;
        }
        net
    }
}

fn weight_of(arcs: &[Arc], place: usize) -> u32 {
    arcs.binary_search_by_key(&place, |a| a.place)
        .map(|i| arcs[i].weight)
        .unwrap_or(0)
}

/// Incremental construction of a [`PetriNet`].
///
/// Parallel arcs between the same place and transition are summed.
#[derive(Debug, Default)]
pub struct NetBuilder {
    places: Vec<(String, u32)>,
    transitions: Vec<String>,
    pre: Vec<(usize, usize, u32)>,
    post: Vec<(usize, usize, u32)>,
    units: Option<Vec<UnitInfo>>,
    safe: bool,
}

impl NetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn place(&mut self, name: impl Into<String>, tokens: u32) -> usize {
        self.places.push((name.into(), tokens));
        self.places.len() - 1
    }

    pub fn transition(&mut self, name: impl Into<String>) -> usize {
        self.transitions.push(name.into());
        self.transitions.len() - 1
    }

    /// Arc from `place` into transition `t`.
    pub fn input(&mut self, place: usize, t: usize, weight: u32) -> &mut Self {
        self.pre.push((place, t, weight));
        self
    }

    /// Arc from transition `t` into `place`.
    pub fn output(&mut self, t: usize, place: usize, weight: u32) -> &mut Self {
        self.post.push((place, t, weight));
        self
    }

    pub fn unit(&mut self, name: impl Into<String>, places: Vec<usize>) -> &mut Self {
        self.units.get_or_insert_with(Vec::new).push(UnitInfo {
            name: name.into(),
            places,
        });
        self
    }

    pub fn declare_safe(&mut self, safe: bool) -> &mut Self {
        self.safe = safe;
        self
    }

    pub fn build(self) -> Result<PetriNet, NetError> {
        let mut place_index = HashMap::new();
        let mut places = Vec::with_capacity(self.places.len());
        let mut initial = Vec::with_capacity(self.places.len());
        for (i, (name, tokens)) in self.places.into_iter().enumerate() {
            if place_index.insert(name.clone(), i).is_some() {
                return Err(NetError::DuplicateId(name));
            }
            places.push(PlaceInfo {
                name,
                unit: None,
                unit_code: 0,
            });
            initial.push(tokens);
        }
        let mut transition_index = HashMap::new();
        let mut transitions: Vec<TransitionInfo> = Vec::with_capacity(self.transitions.len());
        for (i, name) in self.transitions.into_iter().enumerate() {
            if place_index.contains_key(&name) || transition_index.insert(name.clone(), i).is_some() {
                return Err(NetError::DuplicateId(name));
            }
            transitions.push(TransitionInfo {
                name,
                pre: Vec::new(),
                post: Vec::new(),
                effect: Vec::new(),
            });
        }
        for (list, is_pre) in [(self.pre, true), (self.post, false)] {
            for (place, t, weight) in list {
                if weight == 0 {
                    return Err(NetError::ZeroWeight(format!(
                        "{} / {}",
                        places[place].name, transitions[t].name
                    )));
                }
                let arcs = if is_pre {
                    &mut transitions[t].pre
                } else {
                    &mut transitions[t].post
                };
                match arcs.iter_mut().find(|a| a.place == place) {
                    Some(a) => a.weight += weight,
                    None => arcs.push(Arc { place, weight }),
                }
            }
        }
        for t in &mut transitions {
            t.pre.sort_by_key(|a| a.place);
            t.post.sort_by_key(|a| a.place);
            let mut effect: Vec<(usize, i64)> = Vec::new();
            for a in &t.pre {
                effect.push((a.place, -i64::from(a.weight)));
            }
            for a in &t.post {
                match effect.iter_mut().find(|(p, _)| *p == a.place) {
                    Some((_, d)) => *d += i64::from(a.weight),
                    None => effect.push((a.place, i64::from(a.weight))),
                }
            }
            effect.retain(|&(_, d)| d != 0);
            effect.sort_by_key(|&(p, _)| p);
            t.effect = effect;
        }

        if let Some(units) = &self.units {
            for (u, unit) in units.iter().enumerate() {
                for (k, &p) in unit.places.iter().enumerate() {
                    if places[p].unit.is_some() {
                        return Err(NetError::PlaceInTwoUnits(places[p].name.clone()));
                    }
                    places[p].unit = Some(u);
                    places[p].unit_code = k as u32 + 1;
                }
            }
            if let Some(p) = places.iter().find(|p| p.unit.is_none()) {
                return Err(NetError::PlaceWithoutUnit(p.name.clone()));
            }
        }

        Ok(PetriNet {
            places,
            transitions,
            initial,
            units: self.units,
            declared_safe: self.safe,
            place_index,
            transition_index,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_assign_one_based_codes() {
        let mut b = NetBuilder::new();
        let ps: Vec<_> = (0..3).map(|i| b.place(format!("p{i}"), 0)).collect();
        b.unit("u0", ps.clone());
        let net = b.build().unwrap();
        assert_eq!(net.places()[0].unit_code, 1);
        assert_eq!(net.places()[2].unit_code, 3);
        assert_eq!(net.places()[1].unit, Some(0));
    }

    #[test]
    fn overlapping_units_rejected() {
        let mut b = NetBuilder::new();
        let p = b.place("p", 0);
        let q = b.place("q", 0);
        b.unit("a", vec![p, q]);
        b.unit("b", vec![q]);
        assert_eq!(b.build().unwrap_err(), NetError::PlaceInTwoUnits("q".into()));
    }

    #[test]
    fn zero_weight_rejected() {
        let mut b = NetBuilder::new();
        let p = b.place("p", 0);
        let t = b.transition("t");
        b.input(p, t, 0);
        assert!(matches!(b.build(), Err(NetError::ZeroWeight(_))));
    }

    #[test]
    fn incidence_matches_weights() {
        let mut b = NetBuilder::new();
        let p = b.place("p", 0);
        let q = b.place("q", 0);
        let t = b.transition("t");
        b.input(p, t, 2).output(t, q, 3).output(t, p, 1);
        let net = b.build().unwrap();
        assert_eq!(net.incidence(p, t), -1);
        assert_eq!(net.incidence(q, t), 3);
        assert_eq!(net.input_weight(q, t), 0);
    }
}

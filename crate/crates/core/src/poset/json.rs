use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{EdgeLabeling, ElemId, Element, PosetError, RankedPoset};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonElement {
    pub id: i64,
    pub rank: usize,
}

/// `{"elements":[{"id","rank"}],"covers":[[id,id]],"labels":{"x,y":label}}`,
/// with `labels` optional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<JsonElement>,
    pub covers: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, i64>>,
}

/// A poset loaded from JSON together with the map from input ids to
/// internal ids.
#[derive(Debug, Clone)]
pub struct LoadedPoset {
    pub poset: RankedPoset,
    pub labeling: Option<EdgeLabeling>,
    pub ids: BTreeMap<i64, ElemId>,
}

fn parse_pair(key: &str) -> Result<(i64, i64), PosetError> {
    let bad = || PosetError::Format(format!("label key {key:?} is not \"x,y\""));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

impl PosetJson {
    /// Builds the poset, renumbering elements by (rank, input id).
    pub fn load(&self) -> Result<LoadedPoset, PosetError> {
        let mut order: Vec<&JsonElement> = self.elements.iter().collect();
        order.sort_by_key(|e| (e.rank, e.id));
        let mut ids = BTreeMap::new();
        for (i, e) in order.iter().enumerate() {
            let internal = ElemId::try_from(i).map_err(|_| PosetError::Format("too many elements".into()))?;
            if ids.insert(e.id, internal).is_some() {
                return Err(PosetError::Format(format!("duplicate element id {}", e.id)));
            }
        }
        let lookup = |x: i64| ids.get(&x).copied().ok_or_else(|| PosetError::Format(format!("unknown element id {x}")));
        let elements = order.iter().map(|e| Element { id: ids[&e.id], rank: e.rank, name: e.id.to_string() }).collect();
        let covers =
            self.covers.iter().map(|&[x, y]| Ok((lookup(x)?, lookup(y)?))).collect::<Result<Vec<_>, PosetError>>()?;
        let poset = RankedPoset::new(elements, covers)?;
        let labeling = match &self.labels {
            None => None,
            Some(labels) => {
                let mut lambda = EdgeLabeling::new();
                for (key, &label) in labels {
                    let (x, y) = parse_pair(key)?;
                    let (x, y) = (lookup(x)?, lookup(y)?);
                    if !poset.up_covers(x).any(|z| z == y) {
                        return Err(PosetError::Format(format!("label on {key:?}, which is not a cover")));
                    }
                    lambda.insert(x, y, label);
                }
                lambda.is_total_on(&poset)?;
                Some(lambda)
            }
        };
        Ok(LoadedPoset { poset, labeling, ids })
    }

    /// JSON form of `p`, using internal ids.
    pub fn from_poset(p: &RankedPoset, labeling: Option<&EdgeLabeling>) -> Self {
        PosetJson {
            elements: p.ids().iter().map(|&x| JsonElement { id: x.into(), rank: p.rank(x) }).collect(),
            covers: p.covers().into_iter().map(|(x, y)| [x.into(), y.into()]).collect(),
            labels: labeling
                .map(|l| p.covers().into_iter().map(|(x, y)| (format!("{x},{y}"), l.get(x, y).unwrap_or(0))).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{boolean_lattice, flag_h, flag_h_by_descents};
    use super::*;

    #[test]
    fn renumbers_by_rank() {
        let json = r#"{"elements":[{"id":10,"rank":2},{"id":5,"rank":1},{"id":7,"rank":0}],
                      "covers":[[7,5],[5,10]],"labels":{"7,5":1,"5,10":2}}"#;
        let loaded = serde_json::from_str::<PosetJson>(json).unwrap().load().unwrap();
        assert_eq!(loaded.ids[&7], 0);
        assert_eq!(loaded.ids[&10], 2);
        assert_eq!(loaded.poset.name(1), "5");
        assert_eq!(loaded.labeling.unwrap().get(1, 2), Some(2));
    }

    #[test]
    fn round_trip_boolean() {
        let b = boolean_lattice(3);
        let text = serde_json::to_string(&PosetJson::from_poset(&b.poset, Some(&b.labeling))).unwrap();
        let loaded = serde_json::from_str::<PosetJson>(&text).unwrap().load().unwrap();
        assert_eq!(flag_h(&loaded.poset), flag_h(&b.poset));
        assert_eq!(flag_h_by_descents(&loaded.poset, &loaded.labeling.unwrap()).unwrap(), flag_h(&b.poset));
    }

    #[test]
    fn rejects_bad_input() {
        let bad_cover = r#"{"elements":[{"id":0,"rank":0},{"id":1,"rank":1}],"covers":[[0,2]]}"#;
        assert!(serde_json::from_str::<PosetJson>(bad_cover).unwrap().load().is_err());
        let partial = r#"{"elements":[{"id":0,"rank":0},{"id":1,"rank":1},{"id":2,"rank":1}],
                         "covers":[[0,1],[0,2]],"labels":{"0,1":1}}"#;
        assert!(matches!(
            serde_json::from_str::<PosetJson>(partial).unwrap().load(),
            Err(PosetError::MissingLabel(..))
        ));
    }
}

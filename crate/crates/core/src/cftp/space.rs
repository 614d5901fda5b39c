use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};

/// The space on which the dominating Poisson birth-death process lives.
pub trait Space {
    type Site: Clone + std::fmt::Debug;

    /// Integral of the dominating intensity over the whole space.
    fn total_rate(&self) -> f64;

    /// Dominating intensity at `site`.
    fn rate_at(&self, site: &Self::Site) -> f64;

    /// Draws a site with density proportional to the dominating intensity.
    fn sample_site<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Site;
}

/// A finite set of lattice sites with a dominating rate per site.
#[derive(Debug, Clone)]
pub struct LatticeRates {
    sites: Vec<usize>,
    rates: Vec<f64>,
    lookup: std::collections::HashMap<usize, usize>,
    total: f64,
    picker: WeightedIndex<f64>,
}

impl LatticeRates {
    pub fn new(entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let (sites, rates): (Vec<usize>, Vec<f64>) = entries.into_iter().unzip();
        if sites.is_empty() {
            return Err(Error::InvalidModel("lattice has no sites".into()));
        }
        if let Some(bad) = rates.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::InvalidModel(format!(
                "site rates must be finite and positive, got {bad}"
            )));
        }
        let mut lookup = std::collections::HashMap::with_capacity(sites.len());
        for (pos, &s) in sites.iter().enumerate() {
            if lookup.insert(s, pos).is_some() {
                return Err(Error::InvalidModel(format!("site {s} listed twice")));
            }
        }
        let total = rates.iter().sum();
        let picker = WeightedIndex::new(&rates)
            .map_err(|e| Error::InvalidModel(format!("site rates: {e}")))?;
        Ok(Self { sites, rates, lookup, total, picker })
    }

    /// The same rate on sites `0..n`.
    pub fn uniform(n: usize, rate: f64) -> Result<Self> {
        Self::new((0..n).map(|s| (s, rate)))
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

impl Space for LatticeRates {
    type Site = usize;

    fn total_rate(&self) -> f64 {
        self.total
    }

    fn rate_at(&self, site: &usize) -> f64 {
        self.lookup.get(site).map_or(0.0, |&p| self.rates[p])
    }

    fn sample_site<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sites[self.picker.sample(rng)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_rate_sums_sites() {
        let lat = LatticeRates::uniform(2, 0.5).unwrap();
        assert_eq!(lat.total_rate(), 1.0);
        assert_eq!(lat.rate_at(&1), 0.5);
        assert_eq!(lat.rate_at(&9), 0.0);
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(matches!(LatticeRates::uniform(3, 0.0), Err(Error::InvalidModel(_))));
        assert!(matches!(LatticeRates::uniform(3, -1.0), Err(Error::InvalidModel(_))));
        assert!(matches!(LatticeRates::new([(0, f64::NAN)]), Err(Error::InvalidModel(_))));
        assert!(matches!(LatticeRates::new([]), Err(Error::InvalidModel(_))));
        assert!(matches!(LatticeRates::new([(1, 1.0), (1, 2.0)]), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn sampling_follows_rates() {
        let lat = LatticeRates::new([(4, 1.0), (7, 3.0)]).unwrap();
        let mut rng = crate::rng::stream_rng(1, 0);
        let n = 40_000;
        let sevens = (0..n).filter(|_| lat.sample_site(&mut rng) == 7).count();
        let p = sevens as f64 / n as f64;
        assert!((p - 0.75).abs() < 0.01, "p = {p}");
    }
}

use rand::Rng;
use rand_distr::Distribution;

use crate::cftp::Space;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Axis-aligned rectangle `[x0, x0 + width) × [y0, y0 + height)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub y0: f64,
    pub width: f64,
    pub height: f64,
}

impl Window {
    pub fn new(x0: f64, y0: f64, width: f64, height: f64) -> Result<Self> {
        let finite = [x0, y0, width, height].iter().all(|v| v.is_finite());
        if !finite || width <= 0.0 || height <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "window must have positive area, got {width} x {height}"
            )));
        }
        Ok(Self { x0, y0, width, height })
    }

    pub fn unit_square() -> Self {
        Self { x0: 0.0, y0: 0.0, width: 1.0, height: 1.0 }
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn shorter_side(&self) -> f64 {
        self.width.min(self.height)
    }

    /// Closed containment, so patterns read from files may sit on the edge.
    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.x0 && p.x <= self.x0 + self.width && p.y >= self.y0 && p.y <= self.y0 + self.height
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self { x0: self.x0 + dx, y0: self.y0 + dy, ..*self }
    }
}

/// Disc grain of radius `radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grain {
    pub radius: f64,
}

impl Grain {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidModel(format!("grain radius must be positive, got {radius}")));
        }
        Ok(Self { radius })
    }

    /// Exact disc area `πr²`.
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }
}

/// A finite planar point pattern observed in a window.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialPattern {
    pub window: Window,
    pub points: Vec<Point>,
}

impl SpatialPattern {
    pub fn new(window: Window, points: Vec<Point>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !window.contains(p)) {
            return Err(Error::InvalidInput(format!(
                "point ({}, {}) lies outside the window",
                p.x, p.y
            )));
        }
        Ok(Self { window, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// A homogeneous Poisson pattern of the given intensity.
    pub fn poisson<R: Rng + ?Sized>(window: Window, intensity: f64, rng: &mut R) -> Result<Self> {
        let space = UniformRate::new(window, intensity)?;
        let n: f64 = rand_distr::Poisson::new(space.total_rate())
            .map_err(|e| Error::InvalidModel(format!("poisson mean: {e}")))?
            .sample(rng);
        let points = (0..n as usize).map(|_| space.sample_site(rng)).collect();
        Ok(Self { window, points })
    }

    /// The same pattern shifted together with its window.
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            window: self.window.translated(dx, dy),
            points: self.points.iter().map(|p| Point::new(p.x + dx, p.y + dy)).collect(),
        }
    }
}

/// Homogeneous dominating intensity over a window.
#[derive(Debug, Clone, Copy)]
pub struct UniformRate {
    pub window: Window,
    pub rate: f64,
}

impl UniformRate {
    pub fn new(window: Window, rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidModel(format!("rate must be finite and positive, got {rate}")));
        }
        Ok(Self { window, rate })
    }
}

impl Space for UniformRate {
    type Site = Point;

    fn total_rate(&self) -> f64 {
        self.rate * self.window.area()
    }

    fn rate_at(&self, site: &Point) -> f64 {
        if self.window.contains(site) {
            self.rate
        } else {
            0.0
        }
    }

    fn sample_site<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        Point::new(
            self.window.x0 + rng.random::<f64>() * self.window.width,
            self.window.y0 + rng.random::<f64>() * self.window.height,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_validation() {
        assert!(Window::new(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(Window::new(0.0, 0.0, 1.0, -2.0).is_err());
        assert!(Window::new(0.0, f64::NAN, 1.0, 1.0).is_err());
        assert_eq!(Window::new(1.0, 2.0, 3.0, 4.0).unwrap().area(), 12.0);
    }

    #[test]
    fn pattern_rejects_outside_points() {
        let w = Window::unit_square();
        assert!(SpatialPattern::new(w, vec![Point::new(0.5, 1.5)]).is_err());
        assert!(SpatialPattern::new(w, vec![Point::new(1.0, 0.0)]).is_ok());
    }

    #[test]
    fn uniform_rate_validation() {
        let w = Window::unit_square();
        assert!(UniformRate::new(w, 0.0).is_err());
        assert!(UniformRate::new(w, f64::INFINITY).is_err());
        let s = UniformRate::new(Window::new(0.0, 0.0, 2.0, 3.0).unwrap(), 0.5).unwrap();
        assert_eq!(s.total_rate(), 3.0);
    }

    #[test]
    fn grain_validation() {
        assert!(Grain::new(0.0).is_err());
        assert!((Grain::new(0.1).unwrap().area() - 0.031_415_926_535_897_93).abs() < 1e-15);
    }
}

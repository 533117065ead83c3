//! Local equirectangular projection and unit conversions for geodetic input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::Vec2;

pub const EARTH_RADIUS_M: f64 = 6_371_000.0;
pub const PROJECTION_LIMIT_M: f64 = 200_000.0;

pub const MPH_TO_MPS: f64 = 0.44704;
pub const SECONDS_PER_MINUTE: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !(lat.is_finite() && (-90.0..=90.0).contains(&lat)) {
            return Err(Error::InvalidCoordinate(format!("latitude {lat} out of range")));
        }
        if !(lon.is_finite() && (-180.0..=180.0).contains(&lon)) {
            return Err(Error::InvalidCoordinate(format!("longitude {lon} out of range")));
        }
        Ok(Self { lat, lon })
    }

    /// Arithmetic mean of latitudes and longitudes.
    pub fn centroid(points: &[GeoPoint]) -> Option<GeoPoint> {
        if points.is_empty() {
            return None;
        }
        let n = points.len() as f64;
        Some(GeoPoint {
            lat: points.iter().map(|p| p.lat).sum::<f64>() / n,
            lon: points.iter().map(|p| p.lon).sum::<f64>() / n,
        })
    }
}

/// Great-circle distance on a sphere of radius [`EARTH_RADIUS_M`].
pub fn haversine_m(a: GeoPoint, b: GeoPoint) -> f64 {
    let (phi1, phi2) = (a.lat.to_radians(), b.lat.to_radians());
    let dphi = phi2 - phi1;
    let dlmb = (b.lon - a.lon).to_radians();
    let s = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlmb / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * s.sqrt().asin()
}

/// East/north meters of `p` about `reference`.
pub fn project(p: GeoPoint, reference: GeoPoint) -> Result<Vec2> {
    let distance_m = haversine_m(p, reference);
    if distance_m > PROJECTION_LIMIT_M {
        return Err(Error::OutOfProjectionRange {
            distance_m,
            limit_m: PROJECTION_LIMIT_M,
        });
    }
    let x = EARTH_RADIUS_M * (p.lon - reference.lon).to_radians() * reference.lat.to_radians().cos();
    let y = EARTH_RADIUS_M * (p.lat - reference.lat).to_radians();
    Ok(Vec2::new(x, y))
}

pub fn unproject(v: Vec2, reference: GeoPoint) -> GeoPoint {
    GeoPoint {
        lat: reference.lat + (v.y / EARTH_RADIUS_M).to_degrees(),
        lon: reference.lon + (v.x / (EARTH_RADIUS_M * reference.lat.to_radians().cos())).to_degrees(),
    }
}

pub fn mph_to_mps(v: f64) -> f64 {
    v * MPH_TO_MPS
}

pub fn minutes_to_seconds(t: f64) -> f64 {
    t * SECONDS_PER_MINUTE
}

pub fn seconds_to_minutes(t: f64) -> f64 {
    t / SECONDS_PER_MINUTE
}

#[cfg(test)]
mod tests {
    use super::*;

    const ATL: GeoPoint = GeoPoint { lat: 33.637, lon: -84.428 };
    const GA54: GeoPoint = GeoPoint { lat: 33.901, lon: -84.468 };

    #[test]
    fn reference_maps_to_origin() {
        assert_eq!(project(ATL, ATL).unwrap(), Vec2::ZERO);
    }

    #[test]
    fn distance_matches_haversine() {
        let v = project(GA54, ATL).unwrap();
        let hav = haversine_m(GA54, ATL);
        assert!((hav - 29_600.0).abs() < 300.0, "{hav}");
        assert!((v.norm() / hav - 1.0).abs() < 0.005);
    }

    #[test]
    fn east_is_positive_x() {
        let east = GeoPoint { lat: ATL.lat, lon: ATL.lon + 0.1 };
        let v = project(east, ATL).unwrap();
        assert!(v.x > 0.0 && v.y == 0.0);
    }

    #[test]
    fn out_of_range() {
        let far = GeoPoint::new(40.0, -84.0).unwrap();
        assert!(matches!(project(far, ATL), Err(Error::OutOfProjectionRange { .. })));
    }

    #[test]
    fn invalid_coordinates() {
        assert!(GeoPoint::new(91.0, 0.0).is_err());
        assert!(GeoPoint::new(0.0, -181.0).is_err());
        assert!(GeoPoint::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn round_trip_inside_100km() {
        for (dlat, dlon) in [(0.5, 0.5), (-0.7, 0.3), (0.0, -0.9), (0.85, -0.1)] {
            let p = GeoPoint { lat: ATL.lat + dlat, lon: ATL.lon + dlon };
            let v = project(p, ATL).unwrap();
            let back = unproject(v, ATL);
            let err = haversine_m(p, back);
            assert!(err < 1.0, "{err}");
        }
    }

    #[test]
    fn unit_conversions() {
        assert!((mph_to_mps(62.4) - 27.895).abs() < 5e-4);
        assert!((mph_to_mps(55.5) - 24.811).abs() < 5e-4);
        assert_eq!(mph_to_mps(0.0), 0.0);
        assert_eq!(minutes_to_seconds(1.5), 90.0);
    }
}

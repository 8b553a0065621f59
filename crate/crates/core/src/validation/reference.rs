//! Reference energies along the spherocylinder and torus curves.

/// Offset of the spherocylinder curve: the energy of its two caps.
pub const CAPSULE_BASE: f64 = 5.968925;

/// `(n₁, E₀ − CAPSULE_BASE)` for the spherocylinder `R = 1`, `L = 2` at
/// `n = (n₁, 0, √(1 − n₁²))`.
pub const CAPSULE_FIGURE: [(f64, f64); 47] = [
    (-0.99, 9.60282),
    (-0.975, 9.0470157),
    (-0.95, 8.2881565),
    (-0.925, 7.6413149),
    (-0.9, 7.0668152),
    (-0.875, 6.5459916),
    (-0.85, 6.0679461),
    (-0.8, 5.2137358),
    (-0.75, 4.4678824),
    (-0.7, 3.8093796),
    (-0.65, 3.224605),
    (-0.6, 2.7040743),
    (-0.55, 2.2408598),
    (-0.5, 1.829728),
    (-0.45, 1.466629),
    (-0.4, 1.1483766),
    (-0.35, 0.872438),
    (-0.3, 0.63679118),
    (-0.25, 0.43982321),
    (-0.2, 0.2802611),
    (-0.15, 0.1571199),
    (-0.1, 0.0696658),
    (-0.05, 0.01739),
    (0.0, 0.0),
    (0.05, 0.01739),
    (0.1, 0.0696658),
    (0.15, 0.1571199),
    (0.2, 0.2802611),
    (0.25, 0.43982321),
    (0.3, 0.63679118),
    (0.35, 0.872438),
    (0.4, 1.1483766),
    (0.45, 1.466629),
    (0.5, 1.829728),
    (0.55, 2.2408598),
    (0.6, 2.7040743),
    (0.65, 3.224605),
    (0.7, 3.8093796),
    (0.75, 4.4678824),
    (0.8, 5.2137358),
    (0.85, 6.0679461),
    (0.875, 6.5459916),
    (0.9, 7.0668152),
    (0.925, 7.6413149),
    (0.95, 8.2881565),
    (0.975, 9.0470157),
    (0.99, 9.60282),
];

/// `(n₃, E₀)` for the torus `R = 2`, `r = 1` at `n = (√(1 − n₃²), 0, n₃)`.
pub const TORUS_FIGURE: [(f64, f64); 53] = [
    (-1.0, 63.504403),
    (-0.99, 61.815481),
    (-0.98, 60.511893),
    (-0.975, 59.918862),
    (-0.95, 57.297653),
    (-0.925, 55.042305),
    (-0.9, 53.026138),
    (-0.875, 51.189197),
    (-0.85, 49.496297),
    (-0.825, 47.924279),
    (-0.8, 46.456751),
    (-0.75, 43.789151),
    (-0.7, 41.424505),
    (-0.65, 39.317792),
    (-0.6, 37.437495),
    (-0.55, 35.760484),
    (-0.5, 34.269213),
    (-0.45, 32.950054),
    (-0.4, 31.792253),
    (-0.35, 30.787237),
    (-0.3, 29.928142),
    (-0.25, 29.209488),
    (-0.2, 28.626937),
    (-0.15, 28.177129),
    (-0.1, 27.857561),
    (-0.05, 27.666499),
    (0.0, 27.602923),
    (0.05, 27.666499),
    (0.1, 27.857561),
    (0.15, 28.177129),
    (0.2, 28.626937),
    (0.25, 29.209488),
    (0.3, 29.928142),
    (0.35, 30.787237),
    (0.4, 31.792253),
    (0.45, 32.950054),
    (0.5, 34.269213),
    (0.55, 35.760484),
    (0.6, 37.437495),
    (0.65, 39.317792),
    (0.7, 41.424505),
    (0.75, 43.789151),
    (0.8, 46.456751),
    (0.825, 47.924279),
    (0.85, 49.496297),
    (0.875, 51.189197),
    (0.9, 53.026138),
    (0.925, 55.042305),
    (0.95, 57.297653),
    (0.975, 59.918862),
    (0.98, 60.511893),
    (0.99, 61.815481),
    (1.0, 63.504403),
];

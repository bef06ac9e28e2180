use serde::Serialize;

use super::Rect;

/// Compactly supported scalar field that can be paired with a measure.
pub trait Field {
    /// Closed box outside of which the field vanishes.
    fn support(&self) -> Rect;
    fn eval(&self, x: f64, y: f64) -> f64;
}

/// Tensor-product bump `B((x - cx) / rx) B((y - cy) / ry)` with `B(s) = (1 - s^2)^3`.
/// It is C^2 with support exactly the box `[cx - rx, cx + rx] x [cy - ry, cy + ry]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestFunction {
    pub cx: f64,
    pub cy: f64,
    pub rx: f64,
    pub ry: f64,
}

#[inline]
fn bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        let w = 1.0 - s * s;
        w * w * w
    } else {
        0.0
    }
}

#[inline]
fn bump_prime(s: f64) -> f64 {
    if s.abs() < 1.0 {
        let w = 1.0 - s * s;
        -6.0 * s * w * w
    } else {
        0.0
    }
}

impl TestFunction {
    pub fn new(cx: f64, cy: f64, rx: f64, ry: f64) -> Self {
        assert!(rx > 0.0 && ry > 0.0, "bump radii must be positive");
        Self { cx, cy, rx, ry }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        bump((x - self.cx) / self.rx) * bump((y - self.cy) / self.ry)
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = (x - self.cx) / self.rx;
        let sy = (y - self.cy) / self.ry;
        (
            bump_prime(sx) / self.rx * bump(sy),
            bump(sx) * bump_prime(sy) / self.ry,
        )
    }

    pub fn partial_x(&self) -> PartialX<'_> {
        PartialX(self)
    }

    pub fn partial_y(&self) -> PartialY<'_> {
        PartialY(self)
    }
}

impl Field for TestFunction {
    fn support(&self) -> Rect {
        Rect {
            x0: self.cx - self.rx,
            x1: self.cx + self.rx,
            y0: self.cy - self.ry,
            y1: self.cy + self.ry,
        }
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        self.value(x, y)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PartialX<'a>(&'a TestFunction);

#[derive(Debug, Clone, Copy)]
pub struct PartialY<'a>(&'a TestFunction);

impl Field for PartialX<'_> {
    fn support(&self) -> Rect {
        self.0.support()
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        self.0.gradient(x, y).0
    }
}

impl Field for PartialY<'_> {
    fn support(&self) -> Rect {
        self.0.support()
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        self.0.gradient(x, y).1
    }
}

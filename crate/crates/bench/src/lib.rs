//! Shared inputs for the kernel benchmarks.

use hannay_vdp::hannay::{make_ellipse_loop, make_square_loop};
use hannay_vdp::{ParamLoop, Params};

pub fn reference_params() -> Params {
    Params { omega: 1.0, eps: 0.1 }
}

pub fn square() -> ParamLoop {
    make_square_loop(0.6, 0.8, 0.1, 0.3).expect("valid square")
}

pub fn ellipse() -> ParamLoop {
    make_ellipse_loop(0.8, 0.1, 0.2, 0.1, 0.0).expect("valid ellipse")
}

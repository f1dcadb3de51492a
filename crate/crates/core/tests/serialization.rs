use std::sync::Arc;

use rapprox::cones::Cone;
use rapprox::nslattice::{preset, NSLattice, PRESET_NAMES};
use rapprox::predictor::{predict_alpha, PointContext};
use rapprox::ratcurves::{named, ParamCurve};
use rapprox::serial::to_sorted_json;
use rapprox::surfaces::Model;

#[test]
fn lattice_and_cone_round_trip() {
    for name in ["hirzebruch:3", "simplefibres:4,2", "case1:2", "case3_multiple:2", "blowup_p2:5", "k3_quartic_line"] {
        let p = preset(name).unwrap();
        let lat = NSLattice::from_json(&p.lattice.to_json()).unwrap();
        assert_eq!(&lat, p.lattice.as_ref());
        let eff = Cone::new(p.lattice.clone(), p.effective_vectors()).unwrap();
        let back = Cone::from_json(&eff.to_json()).unwrap();
        assert_eq!(back, eff);
        assert_eq!(to_sorted_json(&back.to_json()), to_sorted_json(&eff.to_json()));
    }
}

#[test]
fn context_round_trip_keeps_predictions() {
    let p = preset("blowup_p2:4").unwrap();
    let ctx = PointContext::from_preset(&p, &[("line", "L-E1", 1), ("cusp", "3L-2E1-E2-E3-E4", 2)]).unwrap();
    let back = PointContext::from_json(&ctx.to_json(), p.lattice.clone(), None).unwrap();
    let d = p.parse("3L-E1-E2-E3-E4").unwrap();
    assert_eq!(predict_alpha(&ctx, &d).unwrap(), predict_alpha(&back, &d).unwrap());
    let other = Arc::new(NSLattice::from_i64(&["L"], &[&[1]]).unwrap());
    assert!(PointContext::from_json(&ctx.to_json(), other, None).is_err());
}

#[test]
fn curves_and_models_parse() {
    let c = named::cuspidal_cubic();
    let v = serde_json::to_value(&c).unwrap();
    assert_eq!(ParamCurve::from_json(&v).unwrap(), c);
    let m = Model::from_json(&serde_json::json!({"type": "hirzebruch", "n": 2, "class": [3, 1]})).unwrap();
    assert_eq!(m, Model::Hirzebruch { n: 2, a: 3, b: 1 });
    assert!(Model::from_json(&serde_json::json!({"type": "torus"})).is_err());
}

#[test]
fn every_preset_family_resolves() {
    for spec in PRESET_NAMES {
        let concrete = spec.replace("N,K", "4,2").replace(":N", ":2").replace(":R", ":3");
        let p = preset(&concrete).unwrap_or_else(|e| panic!("{concrete}: {e}"));
        assert!(p.lattice.rank() >= 2);
    }
    assert!(preset("case3:1").is_err());
    assert!(preset("simplefibres:3,3").is_err());
}

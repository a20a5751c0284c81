//! Published reference rows for the four standard scans, with
//! `g1 = g2 = g` and `delta` either zero or `0.1 g`.

use serde::Serialize;

/// One published row: times (µs), fidelity, and success probability in percent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PublishedRow {
    pub times: [f64; 3],
    pub fidelity: f64,
    pub success_percent: f64,
}

const fn row(t1: f64, t2: f64, t3: f64, fidelity: f64, success_percent: f64) -> PublishedRow {
    PublishedRow { times: [t1, t2, t3], fidelity, success_percent }
}

#[derive(Clone, Copy, Debug)]
pub struct ReferenceTable {
    pub number: u8,
    pub g: f64,
    pub delta_over_g: f64,
    pub rows: &'static [PublishedRow],
}

impl ReferenceTable {
    pub fn delta(&self) -> f64 {
        self.delta_over_g * self.g
    }
}

pub const TABLES: [ReferenceTable; 4] = [
    ReferenceTable { number: 1, g: 1.0, delta_over_g: 0.0, rows: TABLE_I_ROWS },
    ReferenceTable { number: 2, g: 1.0, delta_over_g: 0.1, rows: TABLE_II_ROWS },
    ReferenceTable { number: 3, g: 17.5, delta_over_g: 0.0, rows: TABLE_III_ROWS },
    ReferenceTable { number: 4, g: 17.5, delta_over_g: 0.1, rows: TABLE_IV_ROWS },
];

pub fn table(number: u8) -> Option<&'static ReferenceTable> {
    TABLES.iter().find(|t| t.number == number)
}

const TABLE_I_ROWS: &[PublishedRow] = &[
    row(1.0, 1.0, 45.0, 0.953017, 70.9),
    row(5.0, 1.0, 1.0, 0.952057, 42.0),
    row(5.0, 1.0, 46.0, 0.951075, 50.5),
    row(12.0, 1.0, 1.0, 0.953527, 51.3),
    row(12.0, 1.0, 2.0, 0.970373, 73.9),
    row(12.0, 1.0, 20.0, 0.968870, 75.5),
    row(12.0, 1.0, 27.0, 0.968235, 76.3),
    row(12.0, 1.0, 34.0, 0.953858, 49.3),
    row(12.0, 1.0, 45.0, 0.975297, 67.0),
    row(12.0, 1.0, 46.0, 0.965878, 59.8),
    row(23.0, 1.0, 1.0, 0.968455, 46.8),
    row(23.0, 1.0, 2.0, 0.969310, 69.7),
    row(23.0, 1.0, 20.0, 0.966943, 71.4),
    row(23.0, 1.0, 27.0, 0.967875, 72.0),
    row(23.0, 1.0, 34.0, 0.955247, 45.8),
    row(23.0, 1.0, 45.0, 0.976124, 62.9),
    row(23.0, 1.0, 46.0, 0.975231, 55.3),
    row(34.0, 1.0, 1.0, 0.957197, 42.7),
    row(34.0, 1.0, 45.0, 0.951170, 58.9),
    row(34.0, 1.0, 46.0, 0.957395, 51.2),
    row(41.0, 1.0, 2.0, 0.968149, 74.6),
    row(41.0, 1.0, 20.0, 0.966810, 76.2),
    row(41.0, 1.0, 27.0, 0.965816, 77.1),
    row(41.0, 1.0, 34.0, 0.951813, 49.8),
    row(41.0, 1.0, 45.0, 0.972791, 67.7),
    row(41.0, 1.0, 46.0, 0.961744, 60.7),
];

const TABLE_II_ROWS: &[PublishedRow] = &[
    row(1.0, 1.0, 1.0, 0.917148, 55.9),
    row(1.0, 1.0, 2.0, 0.947847, 77.6),
    row(1.0, 1.0, 9.0, 0.845914, 54.4),
    row(1.0, 1.0, 13.0, 0.818697, 50.7),
    row(1.0, 32.0, 5.0, 0.851816, 78.4),
    row(2.0, 30.0, 3.0, 0.883008, 3.5),
    row(5.0, 1.0, 1.0, 0.936816, 42.6),
    row(5.0, 1.0, 2.0, 0.923425, 65.1),
    row(5.0, 1.0, 8.0, 0.837938, 44.4),
    row(5.0, 1.0, 9.0, 0.804010, 45.0),
    row(5.0, 1.0, 15.0, 0.846834, 26.4),
    row(5.0, 32.0, 5.0, 0.834717, 66.1),
    row(5.0, 32.0, 10.0, 0.823751, 33.1),
    row(6.0, 30.0, 1.0, 0.815561, 44.6),
    row(6.0, 30.0, 2.0, 0.845026, 62.7),
    row(8.0, 1.0, 2.0, 0.829526, 83.7),
    row(8.0, 1.0, 9.0, 0.810296, 54.5),
    row(12.0, 1.0, 1.0, 0.876137, 52.8),
    row(12.0, 1.0, 2.0, 0.899566, 74.7),
    row(12.0, 1.0, 8.0, 0.805662, 55.9),
    row(12.0, 1.0, 9.0, 0.814788, 52.4),
    row(12.0, 1.0, 13.0, 0.808298, 48.5),
    row(12.0, 32.0, 5.0, 0.818571, 75.5),
    row(50.0, 1.0, 1.0, 0.827253, 54.7),
    row(50.0, 1.0, 2.0, 0.835046, 76.5),
    row(50.0, 1.0, 48.0, 0.801231, 50.7),
];

const TABLE_III_ROWS: &[PublishedRow] = &[
    row(15.0, 38.0, 19.0, 0.955450, 34.1),
    row(15.0, 38.0, 47.0, 0.955040, 29.6),
    row(15.0, 38.0, 53.0, 0.956239, 39.3),
    row(15.0, 38.0, 61.0, 0.953247, 31.6),
    row(15.0, 38.0, 89.0, 0.956397, 42.0),
    row(15.0, 38.0, 95.0, 0.963001, 32.0),
    row(32.0, 38.0, 19.0, 0.951438, 32.9),
    row(32.0, 38.0, 47.0, 0.954557, 28.5),
    row(32.0, 38.0, 53.0, 0.951940, 38.1),
    row(32.0, 38.0, 61.0, 0.951898, 30.4),
    row(32.0, 38.0, 89.0, 0.951164, 40.7),
    row(32.0, 38.0, 95.0, 0.961062, 30.8),
    row(38.0, 38.0, 89.0, 0.951349, 47.6),
    row(49.0, 38.0, 95.0, 0.956297, 29.7),
    row(55.0, 38.0, 19.0, 0.952102, 38.1),
    row(55.0, 38.0, 25.0, 0.950950, 54.3),
    row(55.0, 38.0, 53.0, 0.952674, 43.7),
    row(55.0, 38.0, 89.0, 0.955947, 46.3),
    row(55.0, 38.0, 95.0, 0.952517, 36.1),
    row(72.0, 38.0, 19.0, 0.955415, 36.9),
    row(72.0, 38.0, 25.0, 0.952313, 52.9),
    row(72.0, 38.0, 53.0, 0.956310, 42.4),
    row(72.0, 38.0, 89.0, 0.958697, 45.0),
    row(72.0, 38.0, 95.0, 0.957923, 34.9),
    row(89.0, 38.0, 25.0, 0.951564, 51.6),
    row(89.0, 38.0, 95.0, 0.961521, 33.7),
];

const TABLE_IV_ROWS: &[PublishedRow] = &[
    row(10.0, 30.0, 17.0, 0.842295, 58.4),
    row(10.0, 30.0, 21.0, 0.837639, 46.8),
    row(10.0, 30.0, 43.0, 0.803492, 62.4),
    row(10.0, 30.0, 46.0, 0.855158, 87.6),
    row(13.0, 30.0, 9.0, 0.816954, 49.0),
    row(13.0, 30.0, 17.0, 0.854786, 58.3),
    row(13.0, 30.0, 21.0, 0.819474, 46.6),
    row(13.0, 30.0, 34.0, 0.806463, 68.8),
    row(13.0, 30.0, 46.0, 0.848566, 86.5),
    row(13.0, 30.0, 49.0, 0.825522, 68.2),
    row(15.0, 27.0, 50.0, 0.809714, 18.8),
    row(18.0, 27.0, 11.0, 0.844388, 53.4),
    row(18.0, 27.0, 14.0, 0.832976, 23.3),
    row(18.0, 27.0, 36.0, 0.870633, 27.4),
    row(18.0, 27.0, 40.0, 0.830723, 24.5),
    row(18.0, 27.0, 50.0, 0.921186, 20.4),
    row(21.0, 27.0, 36.0, 0.802649, 30.3),
    row(21.0, 27.0, 50.0, 0.868293, 23.1),
    row(39.0, 30.0, 17.0, 0.805561, 57.6),
    row(39.0, 30.0, 21.0, 0.828222, 45.7),
    row(39.0, 30.0, 43.0, 0.811022, 62.6),
    row(39.0, 30.0, 46.0, 0.862737, 83.8),
    row(42.0, 30.0, 9.0, 0.861602, 46.4),
    row(42.0, 30.0, 17.0, 0.831920, 56.9),
    row(42.0, 30.0, 21.0, 0.835240, 45.0),
    row(42.0, 30.0, 34.0, 0.836005, 64.8),
];

//! Identifiers of the metric catalog.

use core::fmt;
use core::str::FromStr;

use crate::error::Error;
use crate::types::{Scale, Unit};

macro_rules! metric_ids {
    ($($variant:ident => $id:literal, $catalog:literal, $scale:ident, $unit:ident, $label:literal;)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum MetricId {
            $($variant,)*
        }

        impl MetricId {
            pub const ALL: &'static [MetricId] = &[$(MetricId::$variant,)*];

            /// Stable textual id used in files and on the command line.
            pub fn as_str(self) -> &'static str {
                match self {
                    $(MetricId::$variant => $id,)*
                }
            }

            /// Whether the metric has its own record in the property knowledge base.
            pub fn in_catalog(self) -> bool {
                match self {
                    $(MetricId::$variant => $catalog,)*
                }
            }

            pub fn scale(self) -> Scale {
                match self {
                    $(MetricId::$variant => Scale::$scale,)*
                }
            }

            pub fn unit(self) -> Unit {
                match self {
                    $(MetricId::$variant => Unit::$unit,)*
                }
            }

            pub fn label(self) -> &'static str {
                match self {
                    $(MetricId::$variant => $label,)*
                }
            }
        }

        impl FromStr for MetricId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self, Error> {
                match s {
                    $($id => Ok(MetricId::$variant),)*
                    _ => Err(Error::UnknownMetric(s.into())),
                }
            }
        }
    };
}

metric_ids! {
    Aci => "ACI", true, Ratio, Probability, "Accident-Criticality Index";
    Ags => "AGS", true, Ratio, DistanceM, "Accepted Gap Size";
    Am => "AM", true, Nominal, Dimensionless, "Accident Metric";
    ALatReq => "a_lat_req", true, Ratio, AccelMps2, "Required Lateral Acceleration";
    ALongReq => "a_long_req", true, Ratio, AccelMps2, "Required Longitudinal Acceleration";
    AReq => "a_req", true, Ratio, AccelMps2, "Required Acceleration";
    Btn => "BTN", true, Ratio, Dimensionless, "Brake Threat Number";
    Ci => "CI", true, Ratio, EnergyJ, "Conflict Index";
    Cpi => "CPI", true, Ratio, Probability, "Crash Potential Index";
    Cs => "CS", true, Interval, SpeedMps, "Conflict Severity";
    Dce => "DCE", true, Ratio, DistanceM, "Distance of Closest Encounter";
    DeltaV => "delta_v", true, Interval, SpeedMps, "Delta-v";
    Dst => "DST", true, Ratio, AccelMps2, "Deceleration to Safety Time";
    Et => "ET", true, Ratio, TimeS, "Encroachment Time";
    Hw => "HW", true, Ratio, DistanceM, "Headway";
    LatJ => "LatJ", true, Interval, JerkMps3, "Lateral Jerk";
    LongJ => "LongJ", true, Interval, JerkMps3, "Longitudinal Jerk";
    Pet => "PET", true, Ratio, TimeS, "Post-Encroachment Time";
    Pf => "PF", true, Ratio, Dimensionless, "Potential Functions";
    PMc => "P-MC", true, Ratio, Probability, "Collision Probability via Monte Carlo";
    Pret => "PrET", true, Ratio, TimeS, "Predicted Encroachment Time";
    Pri => "PRI", true, Ratio, TimeSpeed2, "Pedestrian Risk Index";
    Psd => "PSD", true, Ratio, Dimensionless, "Proportion of Stopping Distance";
    PSmh => "P-SMH", true, Ratio, Probability, "Collision Probability via Scoring Multiple Hypotheses";
    PSrs => "P-SRS", true, Ratio, Probability, "Collision Probability via Stochastic Reachable Sets";
    Pttc => "PTTC", true, Ratio, TimeS, "Potential Time To Collision";
    Rss => "RSS", true, Nominal, Dimensionless, "Responsibility Sensitive Safety Dangerous Situation";
    Soi => "SOI", true, Ratio, Count, "Space Occupancy Index";
    Sp => "SP", true, Ratio, Dimensionless, "Safety Potential";
    Stn => "STN", true, Ratio, Dimensionless, "Steer Threat Number";
    Tci => "TCI", true, Ratio, Dimensionless, "Trajectory Criticality Index";
    Tet => "TET", true, Ratio, TimeS, "Time Exposed Time To Collision";
    Thw => "THW", true, Ratio, TimeS, "Time Headway";
    Tit => "TIT", true, Ratio, Time2S2, "Time Integrated Time To Collision";
    Ttb => "TTB", true, Interval, TimeS, "Time To Brake";
    Ttc => "TTC", true, Ratio, TimeS, "Time To Collision";
    Ttce => "TTCE", true, Ratio, TimeS, "Time To Closest Encounter";
    Ttk => "TTK", true, Interval, TimeS, "Time To Kickdown";
    Ttm => "TTM", true, Interval, TimeS, "Time To Maneuver";
    Ttr => "TTR", true, Interval, TimeS, "Time To React";
    Tts => "TTS", true, Interval, TimeS, "Time To Steer";
    Ttz => "TTZ", true, Ratio, TimeS, "Time To Zebra";
    Wttc => "WTTC", true, Ratio, TimeS, "Worst Time To Collision";
    Tto => "TTO", false, Ratio, TimeS, "Time To Object";
    Tta => "TTA", false, Ratio, TimeS, "Time To Accident";
    Spret => "SPrET", false, Ratio, Time2S2, "Squared Predicted Encroachment Time";
    Ta => "TA", false, Ratio, TimeS, "Time To Accident (constant velocity)";
    AReqCond => "a_req_cond", false, Ratio, AccelMps2, "Conditional Required Acceleration";
    Msd => "MSD", false, Ratio, DistanceM, "Minimum Stopping Distance";
    JokschFatality => "joksch_fatality", false, Ratio, Probability, "Fatality Probability from Delta-v";
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for MetricId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for MetricId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = <alloc::borrow::Cow<'de, str> as serde::Deserialize>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_43_entries() {
        assert_eq!(MetricId::ALL.iter().filter(|m| m.in_catalog()).count(), 43);
    }

    #[test]
    fn ids_round_trip() {
        for m in MetricId::ALL {
            assert_eq!(m.as_str().parse::<MetricId>().unwrap(), *m);
        }
        assert!("XYZ".parse::<MetricId>().is_err());
    }
}

//! Body measurements that anchor every drafted length.

use serde::{Deserialize, Serialize};

/// Measurement set in cm standing in for a parametric body model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyModel {
    pub waist: f64,
    pub hips: f64,
    pub bust: f64,
    pub shoulder_width: f64,
    pub arm_length: f64,
    pub leg_length: f64,
    pub torso_length: f64,
    pub neck: f64,
    pub arm_circumference: f64,
    pub height: f64,
}

/// Names a [`BodyModel`] field; used by registry anchors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measurement {
    Waist,
    Hips,
    Bust,
    ShoulderWidth,
    ArmLength,
    LegLength,
    TorsoLength,
    Neck,
    ArmCircumference,
    Height,
}

impl Default for BodyModel {
    /// Neutral adult used for all reproducible geometry.
    fn default() -> Self {
        BodyModel {
            waist: 72.0,
            hips: 96.0,
            bust: 92.0,
            shoulder_width: 40.0,
            arm_length: 60.0,
            leg_length: 78.0,
            torso_length: 45.0,
            neck: 38.0,
            arm_circumference: 28.0,
            height: 170.0,
        }
    }
}

impl BodyModel {
    pub fn get(&self, m: Measurement) -> f64 {
        match m {
            Measurement::Waist => self.waist,
            Measurement::Hips => self.hips,
            Measurement::Bust => self.bust,
            Measurement::ShoulderWidth => self.shoulder_width,
            Measurement::ArmLength => self.arm_length,
            Measurement::LegLength => self.leg_length,
            Measurement::TorsoLength => self.torso_length,
            Measurement::Neck => self.neck,
            Measurement::ArmCircumference => self.arm_circumference,
            Measurement::Height => self.height,
        }
    }

    /// Every measurement multiplied by `k`.
    pub fn scaled(&self, k: f64) -> BodyModel {
        BodyModel {
            waist: self.waist * k,
            hips: self.hips * k,
            bust: self.bust * k,
            shoulder_width: self.shoulder_width * k,
            arm_length: self.arm_length * k,
            leg_length: self.leg_length * k,
            torso_length: self.torso_length * k,
            neck: self.neck * k,
            arm_circumference: self.arm_circumference * k,
            height: self.height * k,
        }
    }

    pub fn is_valid(&self) -> bool {
        [
            self.waist,
            self.hips,
            self.bust,
            self.shoulder_width,
            self.arm_length,
            self.leg_length,
            self.torso_length,
            self.neck,
            self.arm_circumference,
            self.height,
        ]
        .iter()
        .all(|v| v.is_finite() && *v > 0.0)
    }

    /// Natural waist to hip line.
    pub fn hip_depth(&self) -> f64 {
        0.45 * self.torso_length
    }

    /// Natural waist to crotch.
    pub fn crotch_depth(&self) -> f64 {
        0.55 * self.torso_length
    }

    /// Floor to natural waist, used only for placement.
    pub fn waist_height(&self) -> f64 {
        self.leg_length + self.crotch_depth()
    }
}

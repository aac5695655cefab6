//! Kinematic kitchen: one gripper, table-top items and sliding drawers.
//!
//! Policies are straight-line steppers with capped linear and angular speed.
//! Orientation moves along the shortest arc.

use nalgebra::{Isometry3, Translation3, UnitQuaternion, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{WorldError, WorldModel};
use crate::logic::{Domain, LogicalState};
use crate::operators::PolicyRef;

pub type Pose = Isometry3<f64>;

pub const POLICIES: [&str; 10] = [
    "approach",
    "cage",
    "grasp",
    "lift",
    "transport",
    "place",
    "open_drawer",
    "close_drawer",
    "release",
    "retract",
];

/// Gripper pointing straight down.
pub fn top_down() -> UnitQuaternion<f64> {
    UnitQuaternion::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI)
}

/// Rotation magnitude between two orientations, in `[0, pi]`.
pub fn rotation_angle(a: &UnitQuaternion<f64>, b: &UnitQuaternion<f64>) -> f64 {
    (a.inverse() * b).angle()
}

/// Weighted pose cost `lambda_p * |dp| + lambda_r * |theta|`.
pub fn pose_cost(current: &Pose, candidate: &Pose, lambda_p: f64, lambda_r: f64) -> f64 {
    let dp = (candidate.translation.vector - current.translation.vector).norm();
    lambda_p * dp + lambda_r * rotation_angle(&candidate.rotation, &current.rotation)
}

/// Index of the cheapest candidate; ties go to the earliest.
pub fn select_grasp_index(
    current: &Pose,
    candidates: &[Pose],
    lambda_p: f64,
    lambda_r: f64,
) -> Result<usize, WorldError> {
    if candidates.is_empty() {
        return Err(WorldError::Config("no grasp candidates".into()));
    }
    if lambda_p < 0.0 || lambda_r < 0.0 || (lambda_p == 0.0 && lambda_r == 0.0) {
        return Err(WorldError::Config(
            "grasp weights must be non-negative and not both zero".into(),
        ));
    }
    let mut best = 0;
    let mut best_cost = f64::INFINITY;
    for (i, c) in candidates.iter().enumerate() {
        let cost = pose_cost(current, c, lambda_p, lambda_r);
        if cost < best_cost {
            best = i;
            best_cost = cost;
        }
    }
    Ok(best)
}

pub fn select_grasp(
    current: &Pose,
    candidates: &[Pose],
    lambda_p: f64,
    lambda_r: f64,
) -> Result<Pose, WorldError> {
    select_grasp_index(current, candidates, lambda_p, lambda_r).map(|i| candidates[i])
}

/// One bounded step from `current` toward `target`.
pub fn step_toward(current: &Pose, target: &Pose, max_linear: f64, max_angular: f64) -> Pose {
    let d = target.translation.vector - current.translation.vector;
    let dist = d.norm();
    let position = if dist <= max_linear {
        target.translation.vector
    } else {
        current.translation.vector + d * (max_linear / dist)
    };
    let angle = rotation_angle(&current.rotation, &target.rotation);
    let rotation = if angle <= max_angular {
        target.rotation
    } else {
        current
            .rotation
            .try_slerp(&target.rotation, max_angular / angle, 1e-9)
            .unwrap_or_else(|| {
                current.rotation * UnitQuaternion::from_axis_angle(&Vector3::z_axis(), max_angular)
            })
    };
    Pose::from_parts(
        Translation3::from(position),
        UnitQuaternion::new_normalize(rotation.into_inner()),
    )
}

/// Distance from `p` to segment `a`-`b` and the axial parameter of the
/// projection (unclamped).
pub fn segment_distance(p: &Vector3<f64>, a: &Vector3<f64>, b: &Vector3<f64>) -> (f64, f64) {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let t = if len2 == 0.0 {
        0.0
    } else {
        (p - a).dot(&ab) / len2
    };
    let closest = a + ab * t.clamp(0.0, 1.0);
    ((p - closest).norm(), t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrawerGeometry {
    pub name: String,
    pub handle_closed: Vector3<f64>,
    pub interior_closed: Vector3<f64>,
    /// Unit direction the drawer slides when opening.
    pub pull: Vector3<f64>,
    /// Slide distance at full extension, meters.
    pub travel: f64,
    /// Half extents of the interior footprint along x and y.
    pub half_extents: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemGeometry {
    pub name: String,
    /// Distance from the grasp pose back along the approach axis.
    pub standoff: f64,
    /// Height of the grasp point above the item origin.
    pub grasp_height: f64,
}

impl ItemGeometry {
    /// Two top-down grasps half a turn apart, in the item frame.
    pub fn grasp_candidates(&self) -> Vec<Pose> {
        let t = Translation3::new(0.0, 0.0, self.grasp_height);
        let flipped =
            UnitQuaternion::from_axis_angle(&Vector3::z_axis(), std::f64::consts::PI) * top_down();
        vec![
            Pose::from_parts(t, top_down()),
            Pose::from_parts(t, flipped),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Amount {
    Fixed(f64),
    Uniform(f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AdversaryEvent {
    CloseDrawer {
        drawer: String,
        amount: Amount,
    },
    DisplaceObject {
        object: String,
        offset: Vector3<f64>,
    },
    ShoveGripper {
        offset: Vector3<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Trigger {
    AtTick(u64),
    /// `delay` ticks after the drawer first reads as open.
    AfterDrawerOpened {
        drawer: String,
        delay: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledEvent {
    pub trigger: Trigger,
    pub event: AdversaryEvent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KitchenConfig {
    pub robot: String,
    pub max_linear: f64,
    pub max_angular: f64,
    pub home: Vector3<f64>,
    pub approach_radius: f64,
    pub position_margin: f64,
    pub angular_margin: f64,
    pub lambda_p: f64,
    pub lambda_r: f64,
    pub open_threshold: f64,
    pub lift_height: f64,
    pub carry_height: f64,
    pub drop_margin: f64,
    /// Standard deviation of the item's planar shift when grasped.
    pub grasp_noise: f64,
    pub placement_x: [f64; 2],
    pub placement_y: [f64; 2],
    pub min_separation: f64,
    pub max_displacement: f64,
    pub max_shove: f64,
    pub drawers: Vec<DrawerGeometry>,
    pub items: Vec<ItemGeometry>,
}

impl Default for KitchenConfig {
    fn default() -> Self {
        let drawer = |name: &str, dz: f64| DrawerGeometry {
            name: name.into(),
            handle_closed: Vector3::new(0.70, -0.40, 0.15 + dz),
            interior_closed: Vector3::new(0.85, -0.40, 0.05 + dz),
            pull: Vector3::new(-1.0, 0.0, 0.0),
            travel: 0.32,
            half_extents: [0.10, 0.12],
        };
        let item = |name: &str| ItemGeometry {
            name: name.into(),
            standoff: 0.12,
            grasp_height: 0.03,
        };
        Self {
            robot: "robot".into(),
            max_linear: 0.02,
            max_angular: 0.1,
            home: Vector3::new(0.3, 0.0, 0.5),
            approach_radius: 0.05,
            position_margin: 0.01,
            angular_margin: 0.1,
            lambda_p: 1.0,
            lambda_r: 0.1,
            open_threshold: 0.8,
            lift_height: 0.2,
            carry_height: 0.3,
            drop_margin: 0.02,
            grasp_noise: 0.0075,
            placement_x: [0.35, 0.55],
            placement_y: [0.15, 0.35],
            min_separation: 0.08,
            max_displacement: 0.1,
            max_shove: 0.1,
            drawers: vec![drawer("top", 0.0), drawer("bottom", -0.20)],
            items: ["spam", "sugar", "soup"].into_iter().map(item).collect(),
        }
    }
}

impl KitchenConfig {
    pub fn validate(&self) -> Result<(), WorldError> {
        let positive = [
            ("max_linear", self.max_linear),
            ("max_angular", self.max_angular),
            ("approach_radius", self.approach_radius),
            ("position_margin", self.position_margin),
            ("angular_margin", self.angular_margin),
            ("drop_margin", self.drop_margin),
        ];
        for (k, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(WorldError::Config(format!("{k} must be positive, got {v}")));
            }
        }
        if !(self.open_threshold > 0.0 && self.open_threshold <= 1.0) {
            return Err(WorldError::Config(
                "open_threshold must lie in (0, 1]".into(),
            ));
        }
        if self.grasp_noise < 0.0 || self.lambda_p < 0.0 || self.lambda_r < 0.0 {
            return Err(WorldError::Config(
                "noise and grasp weights must be non-negative".into(),
            ));
        }
        if self.placement_x[0] > self.placement_x[1] || self.placement_y[0] > self.placement_y[1] {
            return Err(WorldError::Config("placement range is empty".into()));
        }
        for d in &self.drawers {
            if d.travel.is_nan() || d.travel <= 0.0 || (d.pull.norm() - 1.0).abs() > 1e-9 {
                return Err(WorldError::Config(format!(
                    "drawer `{}` needs positive travel and a unit pull direction",
                    d.name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resting {
    Table,
    Drawer(usize),
    Held,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KitchenObservation {
    pub tick: u64,
    pub gripper: Pose,
    pub aperture: f64,
    pub attached: Option<String>,
    pub items: Vec<(String, Pose)>,
    pub drawer_extensions: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Copy)]
enum AtomKind {
    GripperOpen,
    Attached(usize),
    InApproach(usize),
    Around(usize),
    Lifted(usize),
    AboveDrawer(usize, usize),
    InDrawer(usize, usize),
    DrawerOpen(usize),
}

#[derive(Debug, Clone)]
pub struct KitchenWorld {
    config: KitchenConfig,
    domain: Domain,
    atoms: Vec<AtomKind>,
    gripper: Pose,
    aperture: f64,
    /// Held item and its pose in the gripper frame.
    attached: Option<(usize, Pose)>,
    item_poses: Vec<Pose>,
    resting: Vec<Resting>,
    extensions: Vec<f64>,
    first_opened: Vec<Option<u64>>,
    schedule: Vec<ScheduledEvent>,
    fired: Vec<bool>,
    tick: u64,
    rng: ChaCha8Rng,
}

impl KitchenWorld {
    /// Builds the world with randomized item placement drawn from `seed`.
    pub fn new(domain: Domain, config: KitchenConfig, seed: u64) -> Result<Self, WorldError> {
        Self::with_rng(domain, config, ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn with_stream(
        domain: Domain,
        config: KitchenConfig,
        seed: u64,
        stream: u64,
    ) -> Result<Self, WorldError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self::with_rng(domain, config, rng)
    }

    pub fn with_rng(
        domain: Domain,
        config: KitchenConfig,
        mut rng: ChaCha8Rng,
    ) -> Result<Self, WorldError> {
        config.validate()?;
        let atoms = Self::classify_atoms(&domain, &config)?;
        let item_poses = Self::random_placements(&config, &mut rng)?;
        let n_items = config.items.len();
        let n_drawers = config.drawers.len();
        Ok(Self {
            atoms,
            domain,
            gripper: Pose::from_parts(Translation3::from(config.home), top_down()),
            aperture: 1.0,
            attached: None,
            item_poses,
            resting: vec![Resting::Table; n_items],
            extensions: vec![0.0; n_drawers],
            first_opened: vec![None; n_drawers],
            schedule: Vec::new(),
            fired: Vec::new(),
            tick: 0,
            rng,
            config,
        })
    }

    fn classify_atoms(
        domain: &Domain,
        config: &KitchenConfig,
    ) -> Result<Vec<AtomKind>, WorldError> {
        let item = |name: &str| config.items.iter().position(|i| i.name == name);
        let drawer = |name: &str| config.drawers.iter().position(|d| d.name == name);
        let unknown = |atom: &crate::logic::GroundAtom| {
            WorldError::Config(format!("kitchen cannot evaluate `{atom}`"))
        };
        domain
            .atoms()
            .iter()
            .map(|atom| {
                let args: Vec<&str> = atom.args.iter().map(String::as_str).collect();
                let robot = |a: &str| a == config.robot;
                let kind = match (atom.predicate.as_str(), args.as_slice()) {
                    ("gripper_open", [r]) if robot(r) => Some(AtomKind::GripperOpen),
                    ("is_attached_to", [r, o]) if robot(r) => item(o).map(AtomKind::Attached),
                    ("in_approach_region", [r, o]) if robot(r) => item(o).map(AtomKind::InApproach),
                    ("around_obj", [r, o]) if robot(r) => item(o).map(AtomKind::Around),
                    ("lifted", [o]) => item(o).map(AtomKind::Lifted),
                    ("above_drawer", [o, d]) => item(o)
                        .zip(drawer(d))
                        .map(|(o, d)| AtomKind::AboveDrawer(o, d)),
                    ("in_drawer", [o, d]) => item(o)
                        .zip(drawer(d))
                        .map(|(o, d)| AtomKind::InDrawer(o, d)),
                    ("drawer_is_open", [d]) => drawer(d).map(AtomKind::DrawerOpen),
                    _ => None,
                };
                kind.ok_or_else(|| unknown(atom))
            })
            .collect()
    }

    fn random_placements(
        config: &KitchenConfig,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Pose>, WorldError> {
        let mut poses: Vec<Pose> = Vec::with_capacity(config.items.len());
        for item in &config.items {
            let mut placed = None;
            for _ in 0..1000 {
                let x = rng.random_range(config.placement_x[0]..=config.placement_x[1]);
                let y = rng.random_range(config.placement_y[0]..=config.placement_y[1]);
                let yaw = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                let p = Vector3::new(x, y, 0.0);
                if poses
                    .iter()
                    .all(|q| (q.translation.vector - p).norm() >= config.min_separation)
                {
                    placed = Some(Pose::from_parts(
                        Translation3::from(p),
                        UnitQuaternion::from_axis_angle(&Vector3::z_axis(), yaw),
                    ));
                    break;
                }
            }
            poses.push(
                placed.ok_or_else(|| {
                    WorldError::Config(format!("could not place `{}`", item.name))
                })?,
            );
        }
        Ok(poses)
    }

    pub fn config(&self) -> &KitchenConfig {
        &self.config
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn set_schedule(&mut self, schedule: Vec<ScheduledEvent>) {
        self.fired = vec![false; schedule.len()];
        self.schedule = schedule;
    }

    pub fn gripper(&self) -> Pose {
        self.gripper
    }

    pub fn set_gripper(&mut self, pose: Pose) {
        self.gripper = pose;
        self.follow();
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    pub fn item_index(&self, name: &str) -> Option<usize> {
        self.config.items.iter().position(|i| i.name == name)
    }

    pub fn drawer_index(&self, name: &str) -> Option<usize> {
        self.config.drawers.iter().position(|d| d.name == name)
    }

    pub fn item_pose(&self, item: usize) -> Pose {
        self.item_poses[item]
    }

    pub fn set_item_pose(&mut self, item: usize, pose: Pose) {
        self.item_poses[item] = pose;
    }

    pub fn resting(&self, item: usize) -> Resting {
        self.resting[item]
    }

    pub fn attached(&self) -> Option<usize> {
        self.attached.map(|(i, _)| i)
    }

    /// Held item and its pose in the gripper frame.
    pub fn attachment(&self) -> Option<(usize, Pose)> {
        self.attached
    }

    pub fn extension(&self, drawer: usize) -> f64 {
        self.extensions[drawer]
    }

    pub fn set_extension(&mut self, drawer: usize, extension: f64) {
        self.slide(drawer, extension.clamp(0.0, 1.0) - self.extensions[drawer]);
    }

    pub fn handle(&self, drawer: usize) -> Vector3<f64> {
        let d = &self.config.drawers[drawer];
        d.handle_closed + d.pull * (d.travel * self.extensions[drawer])
    }

    pub fn interior(&self, drawer: usize) -> Vector3<f64> {
        let d = &self.config.drawers[drawer];
        d.interior_closed + d.pull * (d.travel * self.extensions[drawer])
    }

    /// Where a carried item must be to be dropped into `drawer`.
    pub fn drop_point(&self, drawer: usize) -> Vector3<f64> {
        let i = self.interior(drawer);
        Vector3::new(i.x, i.y, self.config.carry_height)
    }

    pub fn grasp_candidates(&self, item: usize) -> Vec<Pose> {
        let base = self.item_poses[item];
        self.config.items[item]
            .grasp_candidates()
            .iter()
            .map(|c| base * c)
            .collect()
    }

    /// The grasp pose currently preferred for `item`.
    pub fn selected_grasp(&self, item: usize) -> Pose {
        let c = self.grasp_candidates(item);
        let i = select_grasp_index(
            &self.gripper,
            &c,
            self.config.lambda_p,
            self.config.lambda_r,
        )
        .unwrap_or(0);
        c[i]
    }

    /// Standoff pose behind `grasp` along its approach axis.
    pub fn standoff(&self, item: usize, grasp: &Pose) -> Pose {
        let axis = grasp.rotation * Vector3::z();
        let p = grasp.translation.vector - axis * self.config.items[item].standoff;
        Pose::from_parts(Translation3::from(p), grasp.rotation)
    }

    pub fn in_approach_region(&self, item: usize) -> bool {
        let g = self.selected_grasp(item);
        let s = self.standoff(item, &g);
        let (dist, t) = segment_distance(
            &self.gripper.translation.vector,
            &s.translation.vector,
            &g.translation.vector,
        );
        (0.0..=1.0).contains(&t) && dist <= self.config.approach_radius
    }

    pub fn around_obj(&self, item: usize) -> bool {
        let g = self.selected_grasp(item);
        (g.translation.vector - self.gripper.translation.vector).norm()
            <= self.config.position_margin
            && rotation_angle(&g.rotation, &self.gripper.rotation) <= self.config.angular_margin
    }

    fn eval(&self, kind: AtomKind) -> bool {
        match kind {
            AtomKind::GripperOpen => self.aperture >= 0.5,
            AtomKind::Attached(o) => self.attached() == Some(o),
            AtomKind::InApproach(o) => self.in_approach_region(o),
            AtomKind::Around(o) => self.around_obj(o),
            AtomKind::Lifted(o) => self.item_poses[o].translation.z >= self.config.lift_height,
            AtomKind::AboveDrawer(o, d) => {
                (self.item_poses[o].translation.vector - self.drop_point(d)).norm()
                    <= self.config.drop_margin
            }
            AtomKind::InDrawer(o, d) => self.resting[o] == Resting::Drawer(d),
            AtomKind::DrawerOpen(d) => self.extensions[d] >= self.config.open_threshold,
        }
    }

    fn follow(&mut self) {
        if let Some((i, offset)) = self.attached {
            self.item_poses[i] = self.gripper * offset;
        }
    }

    fn move_gripper(&mut self, target: &Pose) {
        self.gripper = step_toward(
            &self.gripper,
            target,
            self.config.max_linear,
            self.config.max_angular,
        );
        self.follow();
    }

    fn slide(&mut self, drawer: usize, delta: f64) {
        let before = self.extensions[drawer];
        let after = (before + delta).clamp(0.0, 1.0);
        self.extensions[drawer] = after;
        let d = &self.config.drawers[drawer];
        let shift = d.pull * (d.travel * (after - before));
        for (pose, rest) in self.item_poses.iter_mut().zip(&self.resting) {
            if *rest == Resting::Drawer(drawer) {
                pose.translation.vector += shift;
            }
        }
    }

    /// Lets go of the held item, which lands in an open drawer below it or on the table.
    fn drop_item(&mut self) {
        self.aperture = 1.0;
        let Some((i, _)) = self.attached.take() else {
            return;
        };
        let p = self.item_poses[i].translation.vector;
        let landing = (0..self.config.drawers.len()).find(|&d| {
            let c = self.interior(d);
            let h = self.config.drawers[d].half_extents;
            self.extensions[d] >= self.config.open_threshold
                && (p.x - c.x).abs() <= h[0]
                && (p.y - c.y).abs() <= h[1]
        });
        match landing {
            Some(d) => {
                self.item_poses[i].translation.vector.z = self.interior(d).z;
                self.resting[i] = Resting::Drawer(d);
            }
            None => {
                self.item_poses[i].translation.vector.z = 0.0;
                self.resting[i] = Resting::Table;
            }
        }
    }

    fn item_arg(&self, policy: &PolicyRef, k: usize) -> Result<usize, WorldError> {
        let name = &policy.args[k];
        self.item_index(name)
            .ok_or_else(|| WorldError::UnknownObject {
                policy: policy.id.clone(),
                object: name.clone(),
            })
    }

    fn drawer_arg(&self, policy: &PolicyRef, k: usize) -> Result<usize, WorldError> {
        let name = &policy.args[k];
        self.drawer_index(name)
            .ok_or_else(|| WorldError::UnknownObject {
                policy: policy.id.clone(),
                object: name.clone(),
            })
    }

    fn check_arity(policy: &PolicyRef) -> Result<(), WorldError> {
        let expected = match policy.id.as_str() {
            "approach" | "cage" | "grasp" | "lift" | "open_drawer" | "close_drawer" => 1,
            "transport" | "place" | "release" => 2,
            "retract" => 0,
            _ => return Err(WorldError::UnknownPolicy(policy.id.clone())),
        };
        if policy.args.len() != expected {
            return Err(WorldError::Arity {
                policy: policy.id.clone(),
                expected,
                found: policy.args.len(),
            });
        }
        Ok(())
    }

    fn validate_policy(&self, policy: &PolicyRef) -> Result<(), WorldError> {
        Self::check_arity(policy)?;
        match policy.id.as_str() {
            "open_drawer" | "close_drawer" => self.drawer_arg(policy, 0).map(drop),
            "retract" => Ok(()),
            "transport" | "place" | "release" => {
                self.item_arg(policy, 0)?;
                self.drawer_arg(policy, 1).map(drop)
            }
            _ => self.item_arg(policy, 0).map(drop),
        }
    }

    fn run_policy(&mut self, policy: &PolicyRef) -> Result<(), WorldError> {
        self.validate_policy(policy)?;
        match policy.id.as_str() {
            "approach" => {
                let o = self.item_arg(policy, 0)?;
                let g = self.selected_grasp(o);
                let target = self.standoff(o, &g);
                self.move_gripper(&target);
            }
            "cage" => {
                let o = self.item_arg(policy, 0)?;
                let target = self.selected_grasp(o);
                self.move_gripper(&target);
            }
            "grasp" => {
                let o = self.item_arg(policy, 0)?;
                if self.attached.is_none() && self.around_obj(o) {
                    if self.config.grasp_noise > 0.0 {
                        let n = Normal::new(0.0, self.config.grasp_noise)
                            .expect("finite positive sigma");
                        let dx = n.sample(&mut self.rng);
                        let dy = n.sample(&mut self.rng);
                        self.item_poses[o].translation.vector += Vector3::new(dx, dy, 0.0);
                    }
                    if self.around_obj(o) {
                        self.attached = Some((o, self.gripper.inverse() * self.item_poses[o]));
                        self.resting[o] = Resting::Held;
                    }
                }
                self.aperture = 0.0;
            }
            "lift" => {
                let o = self.item_arg(policy, 0)?;
                let rise = self.config.carry_height - self.item_poses[o].translation.z;
                let mut target = self.gripper;
                target.translation.vector.z += rise;
                self.move_gripper(&target);
            }
            "transport" => {
                let o = self.item_arg(policy, 0)?;
                let d = self.drawer_arg(policy, 1)?;
                let shift = self.drop_point(d) - self.item_poses[o].translation.vector;
                let mut target = self.gripper;
                target.translation.vector += shift;
                self.move_gripper(&target);
            }
            "place" => self.drop_item(),
            "release" => {
                let o = self.item_arg(policy, 0)?;
                if self.attached() == Some(o) {
                    let z = self.item_poses[o].translation.z;
                    if z <= 1e-9 {
                        self.drop_item();
                    } else {
                        let mut target = self.gripper;
                        target.translation.vector.z -= z;
                        self.move_gripper(&target);
                    }
                } else {
                    self.aperture = 1.0;
                }
            }
            "retract" => {
                self.drop_item();
                let home = Pose::from_parts(Translation3::from(self.config.home), top_down());
                self.move_gripper(&home);
            }
            "open_drawer" | "close_drawer" => {
                let d = self.drawer_arg(policy, 0)?;
                let handle = self.handle(d);
                if (handle - self.gripper.translation.vector).norm() > self.config.position_margin {
                    let target = Pose::from_parts(Translation3::from(handle), top_down());
                    self.move_gripper(&target);
                } else {
                    let step = self.config.max_linear / self.config.drawers[d].travel;
                    let delta = if policy.id == "open_drawer" {
                        step
                    } else {
                        -step
                    };
                    self.slide(d, delta);
                    let moved = self.handle(d);
                    self.gripper.translation.vector = moved;
                    self.follow();
                }
            }
            other => return Err(WorldError::UnknownPolicy(other.to_string())),
        }
        Ok(())
    }

    fn apply_event(&mut self, event: &AdversaryEvent) {
        match event {
            AdversaryEvent::CloseDrawer { drawer, amount } => {
                let Some(d) = self.drawer_index(drawer) else {
                    return;
                };
                let a = match *amount {
                    Amount::Fixed(a) => a,
                    Amount::Uniform(lo, hi) if lo < hi => self.rng.random_range(lo..=hi),
                    Amount::Uniform(lo, _) => lo,
                };
                self.slide(d, -a.clamp(0.0, 1.0));
            }
            AdversaryEvent::DisplaceObject { object, offset } => {
                let Some(o) = self.item_index(object) else {
                    return;
                };
                if self.attached() != Some(o) {
                    let offset = clamp_norm(offset, self.config.max_displacement);
                    self.item_poses[o].translation.vector += offset;
                }
            }
            AdversaryEvent::ShoveGripper { offset } => {
                let offset = clamp_norm(offset, self.config.max_shove);
                self.gripper.translation.vector += offset;
                self.follow();
            }
        }
    }

    /// Advances the clock and fires due adversary events.
    fn advance_clock(&mut self) {
        self.tick += 1;
        for d in 0..self.extensions.len() {
            if self.first_opened[d].is_none() && self.extensions[d] >= self.config.open_threshold {
                self.first_opened[d] = Some(self.tick);
            }
        }
        for k in 0..self.schedule.len() {
            if self.fired[k] {
                continue;
            }
            let due = match &self.schedule[k].trigger {
                Trigger::AtTick(t) => self.tick >= *t,
                Trigger::AfterDrawerOpened { drawer, delay } => self
                    .drawer_index(drawer)
                    .and_then(|d| self.first_opened[d])
                    .is_some_and(|t0| self.tick >= t0 + delay),
            };
            if due {
                self.fired[k] = true;
                let event = self.schedule[k].event.clone();
                self.apply_event(&event);
            }
        }
    }
}

fn clamp_norm(v: &Vector3<f64>, max: f64) -> Vector3<f64> {
    let n = v.norm();
    if n > max && n > 0.0 {
        v * (max / n)
    } else {
        *v
    }
}

impl WorldModel for KitchenWorld {
    type Observation = KitchenObservation;
    type Event = AdversaryEvent;

    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn observe(&self) -> KitchenObservation {
        KitchenObservation {
            tick: self.tick,
            gripper: self.gripper,
            aperture: self.aperture,
            attached: self.attached().map(|i| self.config.items[i].name.clone()),
            items: self
                .config
                .items
                .iter()
                .zip(&self.item_poses)
                .map(|(i, p)| (i.name.clone(), *p))
                .collect(),
            drawer_extensions: self
                .config
                .drawers
                .iter()
                .zip(&self.extensions)
                .map(|(d, e)| (d.name.clone(), *e))
                .collect(),
        }
    }

    fn logical_state(&self) -> LogicalState {
        let mut s = self.domain.empty_state();
        for (i, kind) in self.atoms.iter().enumerate() {
            if self.eval(*kind) {
                s.set(i, true);
            }
        }
        s
    }

    fn resolves(&self, policy: &PolicyRef) -> bool {
        self.validate_policy(policy).is_ok()
    }

    fn step(&mut self, policy: &PolicyRef) -> Result<(), WorldError> {
        self.run_policy(policy)?;
        self.advance_clock();
        Ok(())
    }

    fn idle(&mut self) {
        self.advance_clock();
    }

    fn inject(&mut self, event: AdversaryEvent) {
        self.apply_event(&event);
    }
}

/// Predicate schemas the kitchen world can evaluate.
pub fn kitchen_schemas() -> Vec<crate::logic::PredicateSchema> {
    use crate::logic::PredicateSchema;
    vec![
        PredicateSchema::new("gripper_open", &["robot"]),
        PredicateSchema::new("is_attached_to", &["robot", "item"]),
        PredicateSchema::new("in_approach_region", &["robot", "item"]),
        PredicateSchema::new("around_obj", &["robot", "item"]),
        PredicateSchema::new("lifted", &["item"]),
        PredicateSchema::new("above_drawer", &["item", "drawer"]),
        PredicateSchema::new("in_drawer", &["item", "drawer"]),
        PredicateSchema::new("drawer_is_open", &["drawer"]),
    ]
}

/// Grounding domain for a kitchen configuration.
pub fn kitchen_domain(config: &KitchenConfig) -> Domain {
    let mut objects = vec![(config.robot.clone(), "robot".to_string())];
    objects.extend(
        config
            .items
            .iter()
            .map(|i| (i.name.clone(), "item".to_string())),
    );
    objects.extend(
        config
            .drawers
            .iter()
            .map(|d| (d.name.clone(), "drawer".to_string())),
    );
    Domain::new(kitchen_schemas(), objects).expect("kitchen names are distinct")
}

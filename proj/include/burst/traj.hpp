#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "burst/error.hpp"

namespace burst::traj {

struct Pose {
    Eigen::Quaterniond q = Eigen::Quaterniond::Identity();  // unit
    Eigen::Vector3d t = Eigen::Vector3d::Zero();            // cm
};

/// Poses keyed by an integer id; a pose being present means it registered.
/// Ids are unique and kept sorted.
struct Trajectory {
    struct Entry {
        long long id = 0;
        Pose pose;
    };
    std::vector<Entry> poses;
};

/// Plain-text pose files: one "id qw qx qy qz tx ty tz" line per registered
/// pose; '#' starts a comment.
Trajectory load_trajectory(const std::filesystem::path& path);
void save_trajectory(const Trajectory& traj, const std::filesystem::path& path);

/// Ids registered in both trajectories, sorted.
std::vector<long long> common_ids(const Trajectory& a, const Trajectory& b);

struct ScaleResult {
    Trajectory trajectory;
    double scale = 1.0;
};

/// Monocular scale fix: s = gt distance / est distance over the first two
/// commonly registered poses, applied to every estimated translation.
ScaleResult fix_scale_first_pair(const Trajectory& est, const Trajectory& gt);

struct RigidAlignResult {
    Trajectory trajectory;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();
    bool degenerate = false;  // collinear/underdetermined position set
};

/// Least-squares rigid alignment of est onto gt over common poses
/// (orthogonal Procrustes with det +1 enforcement).
RigidAlignResult align_rigid(const Trajectory& est, const Trajectory& gt);

struct PoseErrors {
    std::vector<long long> ids;     // pose id (ATE) or step start id (RPE)
    std::vector<double> trans;      // cm
    std::vector<double> rot_deg;
    double trans_mean = 0.0;
    double rot_mean_deg = 0.0;
};

/// Per-pose position error and geodesic orientation error over common ids.
PoseErrors absolute_instantaneous_error(const Trajectory& est, const Trajectory& gt);

/// Error of consecutive-pose motion increments; invariant to any global
/// rigid transform applied to both trajectories.
PoseErrors relative_pose_error(const Trajectory& est, const Trajectory& gt);

struct TrajectoryError {
    double ate_trans_mean = 0.0;
    double ate_rot_mean_deg = 0.0;
    double rpe_trans_mean = 0.0;
    double rpe_rot_mean_deg = 0.0;
};

}  // namespace burst::traj

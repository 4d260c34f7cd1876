#include "burst/traj.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace burst::traj {

namespace {

constexpr double kRad2Deg = 180.0 / std::numbers::pi;

const Pose* find_pose(const Trajectory& t, long long id) {
    auto it = std::lower_bound(t.poses.begin(), t.poses.end(), id,
                               [](const Trajectory::Entry& e, long long v) { return e.id < v; });
    return (it != t.poses.end() && it->id == id) ? &it->pose : nullptr;
}

double quat_angle_deg(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
    const double dot = std::min(1.0, std::abs(a.dot(b)));
    return 2.0 * std::acos(dot) * kRad2Deg;
}

// Relative motion increment P_i^-1 * P_j.
Pose relative(const Pose& a, const Pose& b) {
    Pose rel;
    const Eigen::Quaterniond inv = a.q.conjugate();
    rel.q = inv * b.q;
    rel.t = inv * (b.t - a.t);
    return rel;
}

void finalize(PoseErrors& e) {
    if (e.trans.empty()) return;
    double ts = 0.0;
    double rs = 0.0;
    for (double v : e.trans) ts += v;
    for (double v : e.rot_deg) rs += v;
    e.trans_mean = ts / static_cast<double>(e.trans.size());
    e.rot_mean_deg = rs / static_cast<double>(e.rot_deg.size());
}

}  // namespace

Trajectory load_trajectory(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_trajectory: cannot open '" + path.string() + "'");
    Trajectory traj;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        long long id;
        double qw, qx, qy, qz, tx, ty, tz;
        if (!(ss >> id)) continue;  // blank line
        if (!(ss >> qw >> qx >> qy >> qz >> tx >> ty >> tz))
            throw IoError("load_trajectory: '" + path.string() + "' line " +
                          std::to_string(line_no) + ": expected 'id qw qx qy qz tx ty tz'");
        Pose pose;
        pose.q = Eigen::Quaterniond(qw, qx, qy, qz);
        const double norm = pose.q.norm();
        if (norm < 1e-6)
            throw NumericError("load_trajectory: near-zero quaternion at line " +
                               std::to_string(line_no));
        pose.q.normalize();
        pose.t = Eigen::Vector3d(tx, ty, tz);
        traj.poses.push_back({id, pose});
    }
    std::sort(traj.poses.begin(), traj.poses.end(),
              [](const Trajectory::Entry& a, const Trajectory::Entry& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < traj.poses.size(); ++i)
        if (traj.poses[i].id == traj.poses[i - 1].id)
            throw IoError("load_trajectory: duplicate pose id " +
                          std::to_string(traj.poses[i].id));
    return traj;
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_trajectory: cannot open '" + path.string() + "'");
    char buf[256];
    for (const Trajectory::Entry& e : traj.poses) {
        std::snprintf(buf, sizeof(buf), "%lld %.12g %.12g %.12g %.12g %.12g %.12g %.12g\n", e.id,
                      e.pose.q.w(), e.pose.q.x(), e.pose.q.y(), e.pose.q.z(), e.pose.t.x(),
                      e.pose.t.y(), e.pose.t.z());
        out << buf;
    }
    if (!out) throw IoError("save_trajectory: write failed");
}

std::vector<long long> common_ids(const Trajectory& a, const Trajectory& b) {
    std::vector<long long> ids;
    for (const Trajectory::Entry& e : a.poses)
        if (find_pose(b, e.id)) ids.push_back(e.id);
    return ids;
}

ScaleResult fix_scale_first_pair(const Trajectory& est, const Trajectory& gt) {
    const std::vector<long long> ids = common_ids(est, gt);
    if (ids.size() < 2)
        throw GeometryError("fix_scale_first_pair: need at least 2 commonly registered poses");
    const Pose* e0 = find_pose(est, ids[0]);
    const Pose* e1 = find_pose(est, ids[1]);
    const Pose* g0 = find_pose(gt, ids[0]);
    const Pose* g1 = find_pose(gt, ids[1]);
    const double est_dist = (e1->t - e0->t).norm();
    const double gt_dist = (g1->t - g0->t).norm();
    if (est_dist <= 0.0)
        throw NumericError("fix_scale_first_pair: first registered pair is coincident in the "
                           "estimate; scale is undefined");
    ScaleResult result;
    result.scale = gt_dist / est_dist;
    result.trajectory = est;
    for (Trajectory::Entry& e : result.trajectory.poses) e.pose.t *= result.scale;
    return result;
}

RigidAlignResult align_rigid(const Trajectory& est, const Trajectory& gt) {
    const std::vector<long long> ids = common_ids(est, gt);
    if (ids.size() < 2) throw GeometryError("align_rigid: need at least 2 common poses");

    Eigen::Vector3d est_centroid = Eigen::Vector3d::Zero();
    Eigen::Vector3d gt_centroid = Eigen::Vector3d::Zero();
    for (long long id : ids) {
        est_centroid += find_pose(est, id)->t;
        gt_centroid += find_pose(gt, id)->t;
    }
    est_centroid /= static_cast<double>(ids.size());
    gt_centroid /= static_cast<double>(ids.size());

    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (long long id : ids)
        h += (find_pose(est, id)->t - est_centroid) * (find_pose(gt, id)->t - gt_centroid).transpose();

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0) d(2, 2) = -1.0;

    RigidAlignResult result;
    result.rotation = svd.matrixV() * d * svd.matrixU().transpose();
    result.translation = gt_centroid - result.rotation * est_centroid;
    // Collinear or near-degenerate position sets leave the rotation
    // underdetermined; flag it but still return the best-effort fit.
    const double s0 = svd.singularValues()(0);
    result.degenerate = s0 <= 0.0 || svd.singularValues()(1) < 1e-12 * s0;

    const Eigen::Quaterniond rq(result.rotation);
    result.trajectory = est;
    for (Trajectory::Entry& e : result.trajectory.poses) {
        e.pose.t = result.rotation * e.pose.t + result.translation;
        e.pose.q = rq * e.pose.q;
    }
    return result;
}

PoseErrors absolute_instantaneous_error(const Trajectory& est, const Trajectory& gt) {
    const std::vector<long long> ids = common_ids(est, gt);
    if (ids.empty()) throw GeometryError("absolute_instantaneous_error: no common pose ids");
    PoseErrors errors;
    for (long long id : ids) {
        const Pose* e = find_pose(est, id);
        const Pose* g = find_pose(gt, id);
        errors.ids.push_back(id);
        errors.trans.push_back((e->t - g->t).norm());
        errors.rot_deg.push_back(quat_angle_deg(e->q, g->q));
    }
    finalize(errors);
    return errors;
}

PoseErrors relative_pose_error(const Trajectory& est, const Trajectory& gt) {
    const std::vector<long long> ids = common_ids(est, gt);
    if (ids.size() < 2)
        throw GeometryError("relative_pose_error: need at least 2 common poses");
    PoseErrors errors;
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
        const Pose d_est = relative(*find_pose(est, ids[i]), *find_pose(est, ids[i + 1]));
        const Pose d_gt = relative(*find_pose(gt, ids[i]), *find_pose(gt, ids[i + 1]));
        const Pose err = relative(d_gt, d_est);
        errors.ids.push_back(ids[i]);
        errors.trans.push_back(err.t.norm());
        errors.rot_deg.push_back(quat_angle_deg(err.q, Eigen::Quaterniond::Identity()));
    }
    finalize(errors);
    return errors;
}

}  // namespace burst::traj

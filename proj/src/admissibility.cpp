// Copyright 2026 The hflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hflow/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hflow/quadrature.hpp"

namespace hflow {

// ---------------------------------------------------------------------------
// Monotone phase projection

std::vector<double> isotonic_projection(std::span<const double> values, std::span<const double> weights, double lo,
                                        double hi) {
    const std::size_t n = values.size();
    if (weights.size() != n) throw Error(ErrorKind::InvalidArgument, "isotonic_projection: weight size mismatch");
    if (lo > hi) throw Error(ErrorKind::InfeasibleAnchors, "isotonic_projection: lower bound above upper bound");

    // Blocks of pooled entries: mean, total weight, length.
    struct Block {
        double mean, weight;
        std::size_t count;
    };
    std::vector<Block> blocks;
    blocks.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(weights[i] > 0.0)) throw Error(ErrorKind::InvalidArgument, "isotonic_projection: weights must be positive");
        blocks.push_back({values[i], weights[i], 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
            const Block top = blocks.back();
            blocks.pop_back();
            Block& prev = blocks.back();
            const double w = prev.weight + top.weight;
            prev.mean = (prev.mean * prev.weight + top.mean * top.weight) / w;
            prev.weight = w;
            prev.count += top.count;
        }
    }
    std::vector<double> out;
    out.reserve(n);
    for (const Block& b : blocks) out.insert(out.end(), b.count, std::clamp(b.mean, lo, hi));
    return out;
}

std::vector<double> project_monotone(std::span<const double> phases, std::span<const double> weights,
                                     std::span<const AnchorValue> anchors, double period) {
    const std::size_t n = phases.size();
    if (weights.size() != n) throw Error(ErrorKind::InvalidArgument, "project_monotone: weight size mismatch");
    if (anchors.empty()) throw Error(ErrorKind::InvalidArgument, "project_monotone: needs at least one anchor");
    for (std::size_t k = 0; k < anchors.size(); ++k) {
        if (anchors[k].position >= n) throw Error(ErrorKind::InvalidArgument, "anchor position out of range");
        if (k > 0 && anchors[k].position <= anchors[k - 1].position) {
            throw Error(ErrorKind::InvalidArgument, "anchors must be sorted by strictly increasing position");
        }
        if (k > 0 && anchors[k].value < anchors[k - 1].value) {
            throw Error(ErrorKind::InfeasibleAnchors, "anchor values decrease along the loop");
        }
    }
    if (anchors.back().value > anchors.front().value + period) {
        throw Error(ErrorKind::InfeasibleAnchors, "anchor values span more than one period");
    }

    std::vector<double> out(phases.begin(), phases.end());
    const std::size_t m = anchors.size();
    for (std::size_t k = 0; k < m; ++k) {
        const AnchorValue& a = anchors[k];
        const bool last = k + 1 == m;
        const std::size_t end = last ? anchors.front().position + n : anchors[k + 1].position;
        const double lo = a.value;
        const double hi = last ? anchors.front().value + period : anchors[k + 1].value;

        std::vector<double> vals, w;
        std::vector<std::size_t> idx;
        for (std::size_t p = a.position + 1; p < end; ++p) {
            const std::size_t i = p % n;
            idx.push_back(i);
            // Entries reached after wrapping live one period up in the lifted frame.
            vals.push_back(p >= n ? phases[i] + period : phases[i]);
            w.push_back(weights[i]);
        }
        const auto proj = isotonic_projection(vals, w, lo, hi);
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const std::size_t p = a.position + 1 + j;
            out[idx[j]] = p >= n ? proj[j] - period : proj[j];
        }
        out[a.position] = a.value;
    }
    return out;
}

std::array<AnchorValue, 3> anchor_lock(const DiskMesh& mesh, const JordanCurve& curve) {
    const auto& phi = curve.anchor_phases();
    const int first = mesh.anchor_indices[0];
    std::array<AnchorValue, 3> lock{};
    for (int k = 0; k < 3; ++k) {
        const int pos = mesh.anchor_indices[k];
        lock[k] = {static_cast<std::size_t>(pos), pos < first ? phi[k] - kTwoPi : phi[k]};
    }
    std::sort(lock.begin(), lock.end(), [](const AnchorValue& a, const AnchorValue& b) { return a.position < b.position; });
    return lock;
}

std::vector<double> anchor_interpolated_phases(const DiskMesh& mesh, const JordanCurve& curve) {
    const auto lock = anchor_lock(mesh, curve);
    const std::size_t n = mesh.num_boundary();
    std::vector<double> phases(n);
    for (std::size_t k = 0; k < 3; ++k) {
        const AnchorValue& a = lock[k];
        const AnchorValue& b = lock[(k + 1) % 3];
        const bool last = k == 2;
        const double ta = mesh.boundary_angles[a.position];
        const double tb = mesh.boundary_angles[b.position] + (last ? kTwoPi : 0.0);
        const double vb = b.value + (last ? kTwoPi : 0.0);
        const std::size_t end = last ? b.position + n : b.position;
        phases[a.position] = a.value;
        for (std::size_t p = a.position + 1; p < end; ++p) {
            const std::size_t i = p % n;
            const double theta = mesh.boundary_angles[i] + (p >= n ? kTwoPi : 0.0);
            const double v = a.value + (theta - ta) / (tb - ta) * (vb - a.value);
            phases[i] = p >= n ? v - kTwoPi : v;
        }
    }
    return phases;
}

SurfaceState initial_state(const DiskMesh& mesh, const JordanCurve& curve, double bump_height) {
    SurfaceState st;
    st.phases = anchor_interpolated_phases(mesh, curve);
    const std::size_t nb = mesh.num_boundary();
    Vec3 centroid = Vec3::Zero();
    for (std::size_t i = 0; i < nb; ++i) centroid += curve.eval(st.phases[i]);
    centroid /= static_cast<double>(nb);

    // Phase as a periodic piecewise linear function of the boundary angle.
    auto phase_at = [&](double alpha) {
        alpha -= kTwoPi * std::floor(alpha / kTwoPi);
        const auto& ang = mesh.boundary_angles;
        auto it = std::upper_bound(ang.begin(), ang.end(), alpha);
        const std::size_t k = static_cast<std::size_t>(it - ang.begin()) - 1;
        const std::size_t k1 = (k + 1) % nb;
        const double t0 = ang[k];
        const double t1 = k1 == 0 ? kTwoPi : ang[k1];
        const double p0 = st.phases[k];
        const double p1 = k1 == 0 ? st.phases[0] + kTwoPi : st.phases[k1];
        return p0 + (alpha - t0) / (t1 - t0) * (p1 - p0);
    };

    for (std::size_t v = nb; v < mesh.num_vertices(); ++v) {
        const Vec2& x = mesh.vertices[v];
        const double rho = x.norm();
        Vec3 p = centroid;
        if (rho > 0.0) p += rho * (curve.eval(phase_at(std::atan2(x.y(), x.x()))) - centroid);
        p.z() += bump_height * (1.0 - rho * rho);
        st.interior.push_back(p);
    }
    return st;
}

Field realize(const DiskMesh& mesh, const JordanCurve& curve, const Obstacle& A, const SurfaceState& state) {
    const std::size_t nb = mesh.num_boundary();
    if (state.phases.size() != nb || state.interior.size() != mesh.num_vertices() - nb) {
        throw Error(ErrorKind::InvalidArgument, "surface state does not match the mesh");
    }
    for (const AnchorValue& a : anchor_lock(mesh, curve)) {
        if (std::abs(state.phases[a.position] - a.value) > 1e-12 * std::max(1.0, std::abs(a.value))) {
            throw Error(ErrorKind::InfeasibleAnchors,
                        "phase at anchor position " + std::to_string(a.position) + " is not locked to its anchor");
        }
    }
    constexpr double slack = 1e-12;
    for (std::size_t i = 0; i + 1 < nb; ++i) {
        if (state.phases[i + 1] < state.phases[i] - slack) {
            throw Error(ErrorKind::InfeasibleAnchors, "phases decrease at boundary position " + std::to_string(i + 1));
        }
    }
    if (state.phases[nb - 1] > state.phases[0] + kTwoPi + slack) {
        throw Error(ErrorKind::InfeasibleAnchors, "phases wind more than once around the curve");
    }

    Field u(mesh.num_vertices());
    for (std::size_t i = 0; i < nb; ++i) {
        u[mesh.boundary_loop[i]] = curve.eval(state.phases[i]);
        if (!A.contains(u[mesh.boundary_loop[i]])) {
            throw Error(ErrorKind::ObstacleViolation, "boundary curve leaves the obstacle");
        }
    }
    for (std::size_t k = 0; k < state.interior.size(); ++k) {
        if (!A.contains(state.interior[k])) {
            throw Error(ErrorKind::ObstacleViolation, "interior vertex " + std::to_string(nb + k) + " is outside A");
        }
        u[nb + k] = state.interior[k];
    }
    return u;
}

SurfaceState recover_state(const DiskMesh& mesh, const JordanCurve& curve, std::span<const Vec3> u) {
    if (u.size() != mesh.num_vertices()) throw Error(ErrorKind::InvalidArgument, "field size does not match the mesh");
    const std::size_t nb = mesh.num_boundary();
    const auto lock = anchor_lock(mesh, curve);
    SurfaceState st;
    st.phases.resize(nb);
    double prev = lock[0].value;
    // Walk the loop from the first anchor, choosing the lift nearest to the previous phase.
    for (std::size_t j = 0; j < nb; ++j) {
        const std::size_t i = (lock[0].position + j) % nb;
        double raw = curve.closest_phase(u[mesh.boundary_loop[i]]);
        raw += kTwoPi * std::round((prev - raw) / kTwoPi);
        const double lifted = (lock[0].position + j >= nb) ? raw - kTwoPi : raw;
        st.phases[i] = j == 0 ? lock[0].value : lifted;
        prev = j == 0 ? lock[0].value : raw;
    }
    std::vector<double> weights(mesh.boundary_mass.begin(), mesh.boundary_mass.end());
    st.phases = project_monotone(st.phases, weights, lock);
    st.interior.assign(u.begin() + static_cast<std::ptrdiff_t>(nb), u.end());
    return st;
}

// ---------------------------------------------------------------------------
// Sufficient conditions

double sigma_factor(double c, double s) {
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorKind::InvalidArgument, "c must lie in (0,1)");
    if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "s must be positive");
    return std::isfinite(s) ? (1.0 + c) / (1.0 - c) : kInfinity;
}

double energy_cap(double c, double s, double initial_dirichlet) {
    const double sigma = sigma_factor(c, s);
    return std::isfinite(sigma) ? sigma * initial_dirichlet : kInfinity;
}

namespace {

/// Area of the sphere of radius r about the H-centre that lies inside A.
double shell_area(const Obstacle& A, const Vec3& h_center, double r) {
    if (!A.is_ball()) return 4.0 * kPi * r * r;
    const auto& b = A.as_ball();
    const double d = (h_center - b.center).norm();
    if (d < 1e-14) return r <= b.radius ? 4.0 * kPi * r * r : 0.0;
    if (r <= 0.0) return 0.0;
    const double kappa = std::clamp((r * r + d * d - b.radius * b.radius) / (2.0 * r * d), -1.0, 1.0);
    return 2.0 * kPi * r * r * (1.0 - kappa);
}

/// int over A of g(H) restricted to {|H| >= tau}, for radial H.
double radial_integral(const PrescribedCurvature& H, const Obstacle& A, const std::function<double(double)>& g,
                       double tau) {
    const auto& rad = *H.as_radial();
    double r_max = rad.radii.back();
    if (A.is_ball()) {
        const auto& b = A.as_ball();
        r_max = (rad.center - b.center).norm() + b.radius;
    }
    std::vector<double> cuts{0.0, r_max};
    for (double r : rad.radii) cuts.push_back(r);
    if (A.is_ball()) {
        const auto& b = A.as_ball();
        const double d = (rad.center - b.center).norm();
        cuts.push_back(std::abs(b.radius - d));
    }
    // Points where the linear pieces cross +-tau.
    for (std::size_t k = 0; k + 1 < rad.radii.size(); ++k) {
        const double y0 = rad.values[k], y1 = rad.values[k + 1];
        for (double level : {tau, -tau}) {
            if ((y0 - level) * (y1 - level) < 0.0) {
                cuts.push_back(rad.radii[k] + (level - y0) / (y1 - y0) * (rad.radii[k + 1] - rad.radii[k]));
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double r) { return r < 0.0 || r > r_max; }), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const LineRule gl = gauss_legendre01(8);
    constexpr int kPieces = 32;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        if (b <= a) continue;
        if (std::abs(H.profile(0.5 * (a + b))) < tau) continue;
        const double hstep = (b - a) / kPieces;
        for (int p = 0; p < kPieces; ++p) {
            for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                const double r = a + hstep * (p + gl.nodes[q]);
                total += hstep * gl.weights[q] * shell_area(A, rad.center, r) * g(H.profile(r));
            }
        }
    }
    return total;
}

ConditionResult make(double value, double threshold, bool pass, std::string note = {}) {
    ConditionResult r;
    r.value = value;
    r.threshold = threshold;
    r.pass = pass;
    r.margin = threshold - value;
    r.note = std::move(note);
    return r;
}

std::vector<Vec3> sphere_points(const Obstacle::Ball& b, int n) {
    std::vector<Vec3> pts;
    pts.reserve(n);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts.push_back(b.center + b.radius * Vec3(rr * std::cos(phi), rr * std::sin(phi), z));
    }
    return pts;
}

}  // namespace

ConditionResult check_condition(Condition which, const PrescribedCurvature& H, const Obstacle& A,
                                double initial_dirichlet, double c, double s) {
    const double sup = H.sup_bound();
    const bool zero = H.is_zero();
    const bool callback = H.kind() == PrescribedCurvature::Kind::Callback;
    switch (which) {
        case Condition::H1: {
            const double thr = initial_dirichlet > 0.0 ? std::sqrt(2.0 * kPi / (3.0 * initial_dirichlet)) : kInfinity;
            return make(sup, thr, sup <= thr);
        }
        case Condition::H2: {
            if (callback) throw Error(ErrorKind::UnsupportedCombination, "(H2) needs a constant or radial H");
            const double thr = 4.5 * kPi;
            if (!A.is_ball()) {
                return make(zero ? 0.0 : kInfinity, thr, zero, zero ? "H vanishes identically" : "A is unbounded");
            }
            const double R = A.as_ball().radius;
            const double tau = 1.5 / R;
            double val = 0.0;
            if (const auto* k = H.as_constant()) {
                const double h = std::abs(k->value);
                val = h >= tau ? h * h * h * A.volume() : 0.0;
            } else {
                val = radial_integral(H, A, [](double h) { return std::pow(std::abs(h), 3); }, tau);
            }
            return make(val, thr, val < thr);
        }
        case Condition::H3: {
            const double vol = A.volume();
            const double thr = std::isfinite(vol) ? 1.5 * std::cbrt(4.0 * kPi / (3.0 * vol)) : 0.0;
            if (zero && !std::isfinite(vol)) return make(0.0, thr, true, "H vanishes identically");
            return make(sup, thr, sup < thr);
        }
        case Condition::H4: {
            if (callback) throw Error(ErrorKind::UnsupportedCombination, "(H4) needs a constant or radial H");
            const double unit_ball = 4.0 * kPi / 3.0;
            if (zero) return make(0.0, 1.0, true, "H vanishes identically");
            double worst = 0.0;
            if (const auto* k = H.as_constant()) {
                worst = std::pow(std::abs(k->value), 3) * A.volume() / unit_ball;
            } else {
                const auto& rad = *H.as_radial();
                if (!A.is_ball() && rad.values.back() != 0.0) {
                    worst = kInfinity;
                } else {
                    std::vector<double> taus;
                    double lo = kInfinity, hi = 0.0;
                    for (double v : rad.values) {
                        if (v != 0.0) {
                            taus.push_back(std::abs(v));
                            lo = std::min(lo, std::abs(v));
                            hi = std::max(hi, std::abs(v));
                        }
                    }
                    lo = std::min(lo, 1e-3 * hi);
                    constexpr int kGrid = 400;
                    for (int i = 0; i <= kGrid; ++i) taus.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / kGrid));
                    for (double tau : taus) {
                        const double level = radial_integral(H, A, [](double) { return 1.0; }, tau);
                        worst = std::max(worst, tau * tau * tau * level / unit_ball);
                    }
                }
            }
            return make(worst, 1.0, worst < 1.0);
        }
        case Condition::Rand: {
            if (!A.has_boundary()) return make(0.0, kInfinity, true, "A has no boundary");
            const auto& b = A.as_ball();
            const double curv = 1.0 / b.radius;
            double worst = 0.0;
            if (const auto* k = H.as_constant()) {
                worst = std::abs(k->value);
            } else if (const auto* rad = H.as_radial()) {
                const double d = (rad->center - b.center).norm();
                const double r0 = std::abs(b.radius - d), r1 = b.radius + d;
                constexpr int kSamples = 2048;
                for (int i = 0; i <= kSamples; ++i) worst = std::max(worst, std::abs(H.profile(r0 + (r1 - r0) * i / kSamples)));
                for (double r : rad->radii) {
                    if (r >= r0 && r <= r1) worst = std::max(worst, std::abs(H.profile(r)));
                }
            } else {
                for (const Vec3& a : sphere_points(b, 4096)) {
                    const double v = std::abs(H(a));
                    if (v > sup * (1.0 + 1e-12)) {
                        throw Error(ErrorKind::InvalidArgument, "H callback exceeds its declared sup_bound");
                    }
                    worst = std::max(worst, v);
                }
            }
            return make(worst, curv, worst <= curv * (1.0 + 1e-12));
        }
        case Condition::AssumUo: {
            const double thr = std::isfinite(s) ? s * (1.0 - c) : kInfinity;
            const double val = 2.0 * initial_dirichlet;
            return make(val, thr, val <= thr, std::isfinite(s) ? "" : "s is infinite");
        }
    }
    return {};
}

ConditionReport check_conditions(const PrescribedCurvature& H, const Obstacle& A, double initial_dirichlet, double c,
                                 double s) {
    ConditionReport rep;
    rep.c = c;
    rep.s = s;
    rep.sigma = sigma_factor(c, s);
    rep.initial_dirichlet = initial_dirichlet;
    const std::pair<const char*, Condition> all[] = {{"h1", Condition::H1},     {"h2", Condition::H2},
                                                      {"h3", Condition::H3},     {"h4", Condition::H4},
                                                      {"rand", Condition::Rand}, {"assum_uo", Condition::AssumUo}};
    for (const auto& [name, which] : all) {
        try {
            rep.conditions[name] = check_condition(which, H, A, initial_dirichlet, c, s);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::UnsupportedCombination) throw;
            ConditionResult r;
            r.supported = false;
            r.note = e.what();
            rep.conditions[name] = r;
        }
    }
    const auto ok = [&](const char* k) { return rep.conditions.at(k).pass; };
    rep.admissible = (ok("h1") || ok("h2") || ok("h3") || ok("h4")) && ok("rand") && ok("assum_uo");
    return rep;
}

}  // namespace hflow

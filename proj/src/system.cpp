#include "liectrl/system.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace liectrl {

namespace {

AlgebraElement controlled_generator(const LinearSystemSpec& sys, const Eigen::VectorXd& c) {
    Eigen::MatrixXd m = sys.drift.mat();
    for (std::size_t j = 0; j < sys.controls.size(); ++j) {
        m += c(static_cast<Eigen::Index>(j)) * sys.controls[j].mat();
    }
    return AlgebraElement(std::move(m));
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

PiecewiseControl random_control(std::mt19937_64& rng, double horizon, double rho, int channels) {
    std::uniform_int_distribution<int> seg_count(1, 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> value(-rho, rho);

    const int k = seg_count(rng);
    const double total = horizon * std::max(unit(rng), 1e-3);
    std::vector<double> weights(static_cast<std::size_t>(k));
    double sum = 0.0;
    for (auto& w : weights) {
        w = unit(rng) + 1e-3;
        sum += w;
    }
    PiecewiseControl u;
    u.segments.reserve(static_cast<std::size_t>(k));
    for (const double w : weights) {
        Eigen::VectorXd c(channels);
        for (Eigen::Index j = 0; j < channels; ++j) c(j) = value(rng);
        u.segments.push_back({total * w / sum, std::move(c)});
    }
    return u;
}

ReachCloud sample_cloud(const LinearSystemSpec& sys, const GroupElement& g, double horizon,
                        int n_points, std::uint64_t seed, bool parallel) {
    if (n_points < 1) {
        throw std::invalid_argument("reachable cloud needs n_points >= 1");
    }
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("reachable cloud needs a positive horizon");
    }
    std::vector<CloudPoint> points;
    points.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        points.push_back({GroupElement::identity(sys.dim()), PiecewiseControl{}});
    }

#if defined(_OPENMP)
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int i = 0; i < n_points; ++i) {
        auto rng = sample_rng(seed, static_cast<std::uint64_t>(i), 0x7265616368ULL);
        PiecewiseControl u =
            random_control(rng, horizon, sys.range.rho, sys.range.m);
        GroupElement p = solve(sys, g, u);
        points[static_cast<std::size_t>(i)] = {std::move(p), std::move(u)};
    }
    (void)parallel;
    return ReachCloud{g, horizon, std::move(points)};
}

double target_distance(const GroupElement& a, const GroupElement& b) {
    return (a.mat() - b.mat()).cwiseAbs().maxCoeff();
}

} // namespace

LinearSystemSpec::LinearSystemSpec(AlgebraElement drift_, std::vector<AlgebraElement> controls_,
                                   ControlRange range_)
    : drift(std::move(drift_)), controls(std::move(controls_)), range(range_) {
    if (controls.empty()) {
        throw std::invalid_argument("system needs at least one control field");
    }
    for (const auto& y : controls) {
        if (y.dim() != drift.dim()) {
            throw std::invalid_argument("control field dimension differs from drift");
        }
    }
    if (range.m != static_cast<int>(controls.size())) {
        throw std::invalid_argument("control range channel count differs from field count");
    }
}

LinearSystemSpec LinearSystemSpec::time_reversed() const {
    std::vector<AlgebraElement> neg;
    neg.reserve(controls.size());
    for (const auto& y : controls) neg.push_back(-y);
    return LinearSystemSpec(-drift, std::move(neg), range);
}

PiecewiseControl::PiecewiseControl(std::vector<Segment> segs) : segments(std::move(segs)) {
    for (const auto& s : segments) {
        if (!(s.duration > 0.0)) {
            throw std::invalid_argument("control segment durations must be positive");
        }
    }
}

PiecewiseControl PiecewiseControl::constant(double duration, double value) {
    Eigen::VectorXd c(1);
    c(0) = value;
    return PiecewiseControl({{duration, std::move(c)}});
}

double PiecewiseControl::total_duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration;
    return t;
}

PiecewiseControl PiecewiseControl::concatenated(const PiecewiseControl& tail) const {
    PiecewiseControl out = *this;
    out.segments.insert(out.segments.end(), tail.segments.begin(), tail.segments.end());
    return out;
}

PiecewiseControl PiecewiseControl::reversed() const {
    PiecewiseControl out = *this;
    std::reverse(out.segments.begin(), out.segments.end());
    return out;
}

PiecewiseControl PiecewiseControl::fitted_to(double t, int channels) const {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("control fit time must be nonnegative");
    }
    PiecewiseControl out;
    double remaining = t;
    for (const auto& s : segments) {
        if (remaining <= 0.0) break;
        const double d = std::min(s.duration, remaining);
        out.segments.push_back({d, s.value});
        remaining -= d;
    }
    if (remaining > 0.0) {
        out.segments.push_back({remaining, Eigen::VectorXd::Zero(channels)});
    }
    return out;
}

std::string PiecewiseControl::serialize() const {
    std::ostringstream os;
    os.precision(17);
    bool first_seg = true;
    for (const auto& s : segments) {
        if (!first_seg) os << ';';
        first_seg = false;
        os << s.duration << ':';
        for (Eigen::Index j = 0; j < s.value.size(); ++j) {
            if (j > 0) os << ',';
            os << s.value(j);
        }
    }
    return os.str();
}

PiecewiseControl PiecewiseControl::parse(const std::string& text) {
    PiecewiseControl u;
    if (text.empty()) return u;
    std::istringstream segs(text);
    std::string seg;
    while (std::getline(segs, seg, ';')) {
        const auto colon = seg.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("control segment needs the form tau:c");
        }
        const double tau = std::stod(seg.substr(0, colon));
        std::vector<double> values;
        std::istringstream vals(seg.substr(colon + 1));
        std::string v;
        while (std::getline(vals, v, ',')) values.push_back(std::stod(v));
        if (values.empty()) {
            throw std::invalid_argument("control segment needs at least one value");
        }
        Eigen::VectorXd c(static_cast<Eigen::Index>(values.size()));
        for (std::size_t j = 0; j < values.size(); ++j) {
            c(static_cast<Eigen::Index>(j)) = values[j];
        }
        u.segments.push_back({tau, std::move(c)});
    }
    return PiecewiseControl(u.segments);
}

GroupElement linear_flow(const LinearSystemSpec& sys, double t, const GroupElement& g) {
    const GroupElement e_plus = group_exp(sys.drift, t);
    const GroupElement e_minus = group_exp(sys.drift, -t);
    return GroupElement(e_plus.mat() * g.mat() * e_minus.mat());
}

GroupElement solve_constant(const LinearSystemSpec& sys, double t, const GroupElement& g,
                            const Eigen::VectorXd& c) {
    if (c.size() != sys.range.m) {
        throw std::invalid_argument("control value has the wrong number of channels");
    }
    if (!sys.range.contains(c)) {
        throw std::invalid_argument("control value outside [-rho, rho]^m");
    }
    const AlgebraElement a = controlled_generator(sys, c);
    return GroupElement(group_exp(a, t).mat() * g.mat() * group_exp(sys.drift, -t).mat());
}

GroupElement solve_constant(const LinearSystemSpec& sys, double t, const GroupElement& g,
                            double c) {
    Eigen::VectorXd v(1);
    v(0) = c;
    return solve_constant(sys, t, g, v);
}

GroupElement solve(const LinearSystemSpec& sys, const GroupElement& g,
                   const PiecewiseControl& u) {
    GroupElement current = g;
    for (const auto& s : u.segments) {
        current = solve_constant(sys, s.duration, current, s.value);
    }
    return current;
}

ReachCloud reachable_cloud(const LinearSystemSpec& sys, const GroupElement& g, double horizon,
                           int n_points, std::uint64_t seed) {
    return sample_cloud(sys, g, horizon, n_points, seed, true);
}

ReachCloud reachable_cloud_serial(const LinearSystemSpec& sys, const GroupElement& g,
                                  double horizon, int n_points, std::uint64_t seed) {
    return sample_cloud(sys, g, horizon, n_points, seed, false);
}

namespace {

/// Split the longest segments in half (same value, so the trajectory is
/// unchanged) until the control has at least min_segments coordinates to
/// refine over.
PiecewiseControl enrich_segments(PiecewiseControl u, std::size_t min_segments) {
    while (u.segments.size() < min_segments && !u.segments.empty()) {
        std::size_t longest = 0;
        for (std::size_t i = 1; i < u.segments.size(); ++i) {
            if (u.segments[i].duration > u.segments[longest].duration) longest = i;
        }
        PiecewiseControl::Segment half = u.segments[longest];
        half.duration /= 2.0;
        u.segments[longest].duration = half.duration;
        u.segments.insert(u.segments.begin() + static_cast<std::ptrdiff_t>(longest), half);
    }
    return u;
}

/// Map a free parameter vector [tau_1..tau_k, u_11..u_km] onto an
/// admissible control: durations folded to >= 1e-4, values clipped to
/// [-rho, rho].
PiecewiseControl params_to_control(const Eigen::VectorXd& p, std::size_t k, int channels,
                                   double rho) {
    PiecewiseControl u;
    u.segments.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        Eigen::VectorXd c(channels);
        for (int j = 0; j < channels; ++j) {
            c(j) = std::clamp(p(static_cast<Eigen::Index>(k + i * static_cast<std::size_t>(channels)) + j),
                              -rho, rho);
        }
        u.segments.push_back({std::max(1e-4, std::abs(p(static_cast<Eigen::Index>(i)))),
                              std::move(c)});
    }
    return u;
}

Eigen::VectorXd control_to_params(const PiecewiseControl& u, int channels) {
    const std::size_t k = u.segments.size();
    Eigen::VectorXd p(static_cast<Eigen::Index>(k * (1 + static_cast<std::size_t>(channels))));
    for (std::size_t i = 0; i < k; ++i) {
        p(static_cast<Eigen::Index>(i)) = u.segments[i].duration;
        for (int j = 0; j < channels; ++j) {
            p(static_cast<Eigen::Index>(k + i * static_cast<std::size_t>(channels)) + j) =
                u.segments[i].value(j);
        }
    }
    return p;
}

/// Derivative-free simplex (Nelder-Mead) refinement of one candidate.
/// Returns when the tolerance is met, the trial cap is reached or the
/// simplex has collapsed. Deterministic.
template <typename Objective>
void simplex_refine(Eigen::VectorXd& x, double& fx, Objective&& objective, long trial_cap,
                    const long& trials, double tolerance, double dur_spread, double val_spread,
                    std::size_t k) {
    const Eigen::Index n = x.size();
    std::vector<std::pair<double, Eigen::VectorXd>> simplex;
    simplex.reserve(static_cast<std::size_t>(n) + 1);
    simplex.emplace_back(fx, x);
    for (Eigen::Index i = 0; i < n && trials < trial_cap; ++i) {
        Eigen::VectorXd v = x;
        v(i) += i < static_cast<Eigen::Index>(k) ? dur_spread : val_spread;
        simplex.emplace_back(objective(v), std::move(v));
    }
    if (simplex.size() != static_cast<std::size_t>(n) + 1) return;

    auto order = [&simplex]() {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
    };
    order();

    while (trials < trial_cap && simplex.front().first > tolerance) {
        // Collapse test on the simplex diameter.
        double diameter = 0.0;
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            diameter = std::max(diameter,
                                (simplex[i].second - simplex[0].second).cwiseAbs().maxCoeff());
        }
        if (diameter < 1e-10) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i].second;
        centroid /= static_cast<double>(n);

        const auto& worst = simplex.back();
        const Eigen::VectorXd reflected = centroid + (centroid - worst.second);
        const double fr = objective(reflected);
        if (fr < simplex.front().first) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - worst.second);
            const double fe = trials < trial_cap ? objective(expanded) : fr + 1.0;
            simplex.back() = fe < fr ? std::make_pair(fe, expanded)
                                     : std::make_pair(fr, reflected);
        } else if (fr < simplex[simplex.size() - 2].first) {
            simplex.back() = {fr, reflected};
        } else {
            const Eigen::VectorXd contracted =
                centroid + 0.5 * ((fr < worst.first ? reflected : worst.second) - centroid);
            const double fc = trials < trial_cap ? objective(contracted) : fr + 1.0;
            if (fc < std::min(fr, worst.first)) {
                simplex.back() = {fc, contracted};
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 1; i < simplex.size() && trials < trial_cap; ++i) {
                    simplex[i].second =
                        simplex[0].second + 0.5 * (simplex[i].second - simplex[0].second);
                    simplex[i].first = objective(simplex[i].second);
                }
            }
        }
        order();
    }
    if (simplex.front().first < fx) {
        fx = simplex.front().first;
        x = simplex.front().second;
    }
}

} // namespace

SteerOutcome steer(const LinearSystemSpec& sys, const GroupElement& target, long budget,
                   std::uint64_t seed, double tolerance) {
    const GroupElement e = GroupElement::identity(sys.dim());
    SteerOutcome best;
    best.distance = target_distance(e, target);
    best.trials = 0;

    auto evaluate = [&](const PiecewiseControl& u) {
        ++best.trials;
        return target_distance(solve(sys, e, u), target);
    };

    // Candidate pool: keep the closest few for refinement.
    constexpr std::size_t kPool = 5;
    std::vector<std::pair<double, PiecewiseControl>> pool;
    auto offer = [&](double d, PiecewiseControl u) {
        if (d < best.distance) {
            best.distance = d;
            best.control = u;
        }
        pool.emplace_back(d, std::move(u));
        std::sort(pool.begin(), pool.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (pool.size() > kPool) pool.pop_back();
    };

    const double rho = sys.range.rho;
    auto constant_candidate = [&](double duration, double value) {
        PiecewiseControl u;
        u.segments.push_back({duration, Eigen::VectorXd::Constant(sys.range.m, value)});
        return u;
    };

    // Structured seeds: one and two constant segments over a coarse
    // duration/value grid.
    const double durations[] = {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0};
    const double values[] = {-rho, -rho / 2.0, rho / 2.0, rho};
    for (const double t : durations) {
        for (const double c : values) {
            if (best.trials >= budget || best.distance <= tolerance) break;
            PiecewiseControl u = constant_candidate(t, c);
            offer(evaluate(u), std::move(u));
        }
    }
    for (const double t1 : {0.5, 1.0, 2.0}) {
        for (const double c1 : values) {
            for (const double t2 : {0.5, 1.0, 2.0}) {
                for (const double c2 : values) {
                    if (best.trials >= budget || best.distance <= tolerance) break;
                    PiecewiseControl u =
                        constant_candidate(t1, c1).concatenated(constant_candidate(t2, c2));
                    offer(evaluate(u), std::move(u));
                }
            }
        }
    }

    // Random shooting.
    auto rng = sample_rng(seed, 0, 0x7374656572ULL);
    const long shots = budget * 3 / 10;
    while (best.trials < shots && best.distance > tolerance) {
        PiecewiseControl u = random_control(rng, 8.0, rho, sys.range.m);
        offer(evaluate(u), std::move(u));
    }

    // Refine the pool with a simplex search, best candidates first, after
    // splitting segments so each candidate has enough coordinates to close
    // a 3-dimensional gap. Leftover budget goes to the global best.
    if (best.distance > tolerance && !pool.empty()) {
        auto refine = [&](const PiecewiseControl& start, double start_dist, long cap,
                          std::size_t segments) {
            const PiecewiseControl enriched = enrich_segments(start, segments);
            const std::size_t k = enriched.segments.size();
            auto objective = [&](const Eigen::VectorXd& p) {
                return evaluate(params_to_control(p, k, sys.range.m, rho));
            };
            Eigen::VectorXd x = control_to_params(enriched, sys.range.m);
            double fx = start_dist;
            simplex_refine(x, fx, objective, cap, best.trials, tolerance, 0.5, rho / 2.0, k);
            if (fx < best.distance) {
                best.distance = fx;
                best.control = params_to_control(x, k, sys.range.m, rho);
            }
        };
        const long per_candidate = (budget - best.trials) / (2 * static_cast<long>(pool.size()));
        for (const auto& [dist, candidate] : pool) {
            if (best.distance <= tolerance || best.trials >= budget) break;
            refine(candidate, dist, best.trials + per_candidate, 4);
        }
        if (best.distance > tolerance && best.trials < budget && !best.control.empty()) {
            refine(best.control, best.distance, budget, 6);
        }
    }

    best.success = best.distance <= tolerance;
    return best;
}

} // namespace liectrl

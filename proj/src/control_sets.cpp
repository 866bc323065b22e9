#include "liectrl/control_sets.hpp"

#include "liectrl/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_set>

namespace liectrl {

namespace {

constexpr double kPi = std::numbers::pi;

double halton(int index, int base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

/// Fractional in-cell offsets: cell center first, then a low-discrepancy
/// fill. Identical for every cell, which the swap symmetry relies on.
std::vector<std::pair<double, double>> stencil_offsets(int count) {
    std::vector<std::pair<double, double>> offsets;
    offsets.reserve(static_cast<std::size_t>(count));
    offsets.emplace_back(0.5, 0.5);
    for (int k = 1; k < count; ++k) {
        offsets.emplace_back(halton(k + 1, 2), halton(k + 1, 3));
    }
    return offsets;
}

AlgebraElement controlled_drift(const LinearSystemSpec& sys, double u) {
    if (sys.dim() != 2 || sys.range.m != 1) {
        throw std::invalid_argument("circle/cylinder analysis needs a single-channel sl(2) system");
    }
    return AlgebraElement(sys.drift.mat() + u * sys.controls.front().mat());
}

void require_conditions(const LinearSystemSpec& sys) {
    const ConditionReport report =
        check_conditions(sys.drift, sys.controls.front(), sys.range.rho);
    if (!report.all()) {
        throw std::invalid_argument(
            "system does not satisfy the structural conditions for the circle analysis");
    }
}

/// Direction angles are defined modulo pi; pull each sample next to the
/// anchor so a family of nearby directions forms one interval.
double unwrap_mod_pi(double angle, double anchor) {
    double a = angle;
    while (a - anchor > kPi / 2.0) a -= kPi;
    while (a - anchor < -kPi / 2.0) a += kPi;
    return a;
}

std::vector<int> cell_out_edges(const CellGrid& grid, int cell,
                                const std::vector<SpectralData>& spectra, double tau,
                                const std::vector<std::pair<double, double>>& offsets) {
    const auto [it, ix] = grid.cell_coords(cell);
    std::vector<int> targets;
    targets.reserve(spectra.size() * offsets.size());
    for (const auto& spec : spectra) {
        for (const auto& [ft, fx] : offsets) {
            const CylinderPoint p = grid.sample_point(it, ix, ft, fx);
            const CylinderPoint q = induced_flow_closed(tau, p, spec);
            targets.push_back(grid.locate(q));
        }
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    return targets;
}

ReachGraph assemble_graph(const LinearSystemSpec& sys, const CellGrid& grid, double tau,
                          const std::vector<double>& controls, int pts_per_cell, bool parallel) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("cell-mapping step time must be positive");
    }
    if (pts_per_cell < 1) {
        throw std::invalid_argument("cell mapping needs at least one sample point per cell");
    }
    const double rho = sys.range.rho;
    auto has = [&controls](double v) {
        return std::any_of(controls.begin(), controls.end(),
                           [v](double c) { return std::abs(c - v) <= 1e-12; });
    };
    if (!has(-rho) || !has(0.0) || !has(rho)) {
        throw std::invalid_argument("control grid must contain -rho, 0 and rho");
    }
    for (const double c : controls) {
        if (std::abs(c) > rho + 1e-12) {
            throw std::invalid_argument("control value outside [-rho, rho]");
        }
    }
    require_conditions(sys);

    std::vector<SpectralData> spectra;
    spectra.reserve(controls.size());
    for (const double c : controls) {
        spectra.push_back(SpectralData::from_generator(controlled_drift(sys, c)));
    }
    const auto offsets = stencil_offsets(pts_per_cell);

    ReachGraph graph{grid, {}};
    graph.out.resize(static_cast<std::size_t>(grid.n_cells()) + 1);

    const int n = grid.n_cells();
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int cell = 0; cell < n; ++cell) {
        graph.out[static_cast<std::size_t>(cell)] =
            cell_out_edges(grid, cell, spectra, tau, offsets);
    }
    (void)parallel;
    return graph;
}

/// Iterative Tarjan; recursion depth would scale with the cell count.
std::vector<std::vector<int>> tarjan_sccs(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> number(static_cast<std::size_t>(n), -1);
    std::vector<int> lowlink(static_cast<std::size_t>(n), -1);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    struct Frame {
        int node;
        std::size_t edge;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (number[static_cast<std::size_t>(root)] != -1) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& frame = call.back();
            const int v = frame.node;
            if (frame.edge == 0) {
                number[static_cast<std::size_t>(v)] = lowlink[static_cast<std::size_t>(v)] =
                    counter++;
                stack.push_back(v);
                on_stack[static_cast<std::size_t>(v)] = true;
            }
            bool descended = false;
            while (frame.edge < adj[static_cast<std::size_t>(v)].size()) {
                const int w = adj[static_cast<std::size_t>(v)][frame.edge++];
                if (number[static_cast<std::size_t>(w)] == -1) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[static_cast<std::size_t>(w)]) {
                    lowlink[static_cast<std::size_t>(v)] = std::min(
                        lowlink[static_cast<std::size_t>(v)], number[static_cast<std::size_t>(w)]);
                }
            }
            if (descended) continue;
            if (lowlink[static_cast<std::size_t>(v)] == number[static_cast<std::size_t>(v)]) {
                std::vector<int> scc;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    scc.push_back(w);
                } while (w != v);
                sccs.push_back(std::move(scc));
            }
            call.pop_back();
            if (!call.empty()) {
                const int parent = call.back().node;
                lowlink[static_cast<std::size_t>(parent)] =
                    std::min(lowlink[static_cast<std::size_t>(parent)],
                             lowlink[static_cast<std::size_t>(v)]);
            }
        }
    }
    return sccs;
}

int wrapped_theta_gap(int a, int b, int n_theta) {
    int d = std::abs(a - b);
    return std::min(d, n_theta - d);
}

int cell_distance(int a, int b, const CellGrid& grid) {
    const auto [at, ax] = grid.cell_coords(a);
    const auto [bt, bx] = grid.cell_coords(b);
    return std::max(wrapped_theta_gap(at, bt, grid.n_theta), std::abs(ax - bx));
}

int directed_hausdorff(const std::vector<int>& from, const std::vector<int>& to,
                       const CellGrid& grid) {
    int worst = 0;
    for (const int a : from) {
        int best = std::numeric_limits<int>::max();
        for (const int b : to) {
            best = std::min(best, cell_distance(a, b, grid));
            if (best == 0) break;
        }
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

CellGrid::CellGrid(int n_theta_, int n_x_, double x_min_, double x_max_)
    : n_theta(n_theta_), n_x(n_x_), x_min(x_min_), x_max(x_max_) {
    if (n_theta < 2 || n_theta % 2 != 0) {
        throw std::invalid_argument("n_theta must be even and positive");
    }
    if (n_x < 1) {
        throw std::invalid_argument("n_x must be positive");
    }
    if (!(x_min < x_max)) {
        throw std::invalid_argument("x window must satisfy x_min < x_max");
    }
}

double CellGrid::dtheta() const {
    return 2.0 * kPi / static_cast<double>(n_theta);
}

double CellGrid::dx() const {
    return (x_max - x_min) / static_cast<double>(n_x);
}

int CellGrid::locate(const Eigen::Vector2d& v, double x) const {
    if (!(x >= x_min) || x >= x_max) return sink_id();
    int ix = static_cast<int>(std::floor((x - x_min) / dx()));
    ix = std::clamp(ix, 0, n_x - 1);

    // Half-circle representative: v and -v share it bit-for-bit, so the
    // swap map acts on cell indices exactly.
    const bool upper = v.y() > 0.0 || (v.y() == 0.0 && v.x() > 0.0);
    const Eigen::Vector2d rep = upper ? v : Eigen::Vector2d(-v);
    const double angle = std::atan2(rep.y(), rep.x());
    const int half = n_theta / 2;
    int it = static_cast<int>(std::floor(angle / dtheta()));
    it = std::clamp(it, 0, half - 1);
    if (!upper) it += half;
    return cell_id(it, ix);
}

CylinderPoint CellGrid::sample_point(int i_theta, int i_x, double f_theta, double f_x) const {
    const double x = x_min + (static_cast<double>(i_x) + f_x) * dx();
    const int half = n_theta / 2;
    if (i_theta >= half) {
        const double theta = (static_cast<double>(i_theta - half) + f_theta) * dtheta();
        const Eigen::Vector2d v(std::cos(theta), std::sin(theta));
        return CylinderPoint::from_vector(-v, x);
    }
    const double theta = (static_cast<double>(i_theta) + f_theta) * dtheta();
    const Eigen::Vector2d v(std::cos(theta), std::sin(theta));
    return CylinderPoint::from_vector(v, x);
}

CylinderPoint CellGrid::cell_center(int id) const {
    const auto [it, ix] = cell_coords(id);
    return sample_point(it, ix, 0.5, 0.5);
}

int CellGrid::antipodal_cell(int id) const {
    if (id == sink_id()) return id;
    const auto [it, ix] = cell_coords(id);
    return cell_id((it + n_theta / 2) % n_theta, ix);
}

bool ControlSetApprox::has_cell(int id) const {
    return std::binary_search(cells.begin(), cells.end(), id);
}

bool CircleArc::contains(double angle) const {
    constexpr double two_pi = 2.0 * kPi;
    double a = std::fmod(angle - lo, two_pi);
    if (a < 0.0) a += two_pi;
    return a <= hi - lo;
}

double circle_attractor(const LinearSystemSpec& sys, double u) {
    const SpectralData s = SpectralData::from_generator(controlled_drift(sys, u));
    return std::atan2(s.v_plus.y(), s.v_plus.x());
}

double circle_repeller(const LinearSystemSpec& sys, double u) {
    const SpectralData s = SpectralData::from_generator(controlled_drift(sys, u));
    return std::atan2(s.v_minus.y(), s.v_minus.x());
}

std::vector<CircleArc> circle_control_sets(const LinearSystemSpec& sys, double rho,
                                           int n_samples) {
    if (n_samples < 2) {
        throw std::invalid_argument("circle control sets need at least two control samples");
    }
    require_conditions(sys);

    auto sweep = [&](auto&& direction, double anchor) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < n_samples; ++k) {
            const double u = -rho + 2.0 * rho * static_cast<double>(k) /
                                        static_cast<double>(n_samples - 1);
            const double a = unwrap_mod_pi(direction(sys, u), anchor);
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
        return std::make_pair(lo, hi);
    };

    const double att0 = circle_attractor(sys, 0.0);
    const double rep0 = circle_repeller(sys, 0.0);
    const auto [alo, ahi] = sweep(circle_attractor, att0);
    const auto [rlo, rhi] = sweep(circle_repeller, rep0);

    std::vector<CircleArc> arcs;
    arcs.push_back({"", alo, ahi});
    arcs.push_back({"", alo + kPi, ahi + kPi});
    arcs.push_back({"", rlo, rhi});
    arcs.push_back({"", rlo + kPi, rhi + kPi});
    bool d1_taken = false;
    bool dm1_taken = false;
    int rest = 0;
    for (auto& arc : arcs) {
        if (!d1_taken && arc.contains(0.0)) {
            arc.label = "D1-circle";
            d1_taken = true;
        } else if (!dm1_taken && arc.contains(kPi)) {
            arc.label = "D-1-circle";
            dm1_taken = true;
        } else {
            arc.label = ++rest == 1 ? "R1-circle" : "R-1-circle";
        }
    }
    return arcs;
}

ReachGraph build_reach_graph(const LinearSystemSpec& sys, const CellGrid& grid, double tau,
                             const std::vector<double>& controls, int pts_per_cell) {
    return assemble_graph(sys, grid, tau, controls, pts_per_cell, true);
}

ReachGraph build_reach_graph_serial(const LinearSystemSpec& sys, const CellGrid& grid,
                                    double tau, const std::vector<double>& controls,
                                    int pts_per_cell) {
    return assemble_graph(sys, grid, tau, controls, pts_per_cell, false);
}

std::vector<ControlSetApprox> extract_control_sets(const ReachGraph& graph,
                                                   int interior_threshold) {
    const CellGrid& grid = graph.grid;
    auto sccs = tarjan_sccs(graph.out);

    std::vector<std::vector<int>> kept;
    for (auto& scc : sccs) {
        if (static_cast<int>(scc.size()) < interior_threshold) continue;
        if (std::find(scc.begin(), scc.end(), grid.sink_id()) != scc.end()) continue;
        std::sort(scc.begin(), scc.end());
        kept.push_back(std::move(scc));
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });

    const struct {
        const char* name;
        CylinderPoint point;
    } anchors[] = {
        {"(e1,0)", CylinderPoint(0.0, 0.0)},
        {"(-e1,0)", CylinderPoint(kPi, 0.0)},
        {"(e2,0)", CylinderPoint(kPi / 2.0, 0.0)},
        {"(-e2,0)", CylinderPoint(3.0 * kPi / 2.0, 0.0)},
    };
    const int d1_cell = grid.locate(anchors[0].point);
    const int dm1_cell = grid.locate(anchors[1].point);

    std::vector<ControlSetApprox> sets;
    int running = 0;
    for (auto& cells : kept) {
        ControlSetApprox cs;
        cs.cells = std::move(cells);
        for (const auto& anchor : anchors) {
            const int c = grid.locate(anchor.point);
            if (c != grid.sink_id() && cs.has_cell(c)) cs.contains.push_back(anchor.name);
        }
        if (cs.has_cell(d1_cell)) {
            cs.label = "D1";
        } else if (cs.has_cell(dm1_cell)) {
            cs.label = "D-1";
        } else {
            std::ostringstream os;
            os << "scc" << ++running;
            cs.label = os.str();
        }
        sets.push_back(std::move(cs));
    }
    return sets;
}

int symmetry_check(const ControlSetApprox& a, const ControlSetApprox& b, const CellGrid& grid) {
    std::vector<int> image;
    image.reserve(a.cells.size());
    for (const int c : a.cells) image.push_back(grid.antipodal_cell(c));
    std::sort(image.begin(), image.end());
    return std::max(directed_hausdorff(image, b.cells, grid),
                    directed_hausdorff(b.cells, image, grid));
}

ProbeResult invariance_probe(const LinearSystemSpec& sys, const ControlSetApprox& d,
                             const CellGrid& grid, long trials) {
    require_conditions(sys);
    const double rho = sys.range.rho;
    const double control_values[] = {-rho, -rho / 2.0, 0.0, rho / 2.0, rho};
    const double step_times[] = {0.25, 0.5, 1.0, 2.0};

    std::unordered_set<int> member(d.cells.begin(), d.cells.end());
    auto in_d = [&member](int cell) { return member.count(cell) != 0; };

    // Boundary: member cells with a non-member among their 8 neighbors
    // (theta wraps; the x edge of the window counts as outside).
    std::vector<int> boundary;
    for (const int cell : d.cells) {
        const auto [it, ix] = grid.cell_coords(cell);
        bool edge = false;
        for (int dt = -1; dt <= 1 && !edge; ++dt) {
            for (int dxi = -1; dxi <= 1 && !edge; ++dxi) {
                if (dt == 0 && dxi == 0) continue;
                const int nt = (it + dt + grid.n_theta) % grid.n_theta;
                const int nx = ix + dxi;
                if (nx < 0 || nx >= grid.n_x || !in_d(grid.cell_id(nt, nx))) edge = true;
            }
        }
        if (edge) boundary.push_back(cell);
    }

    std::vector<SpectralData> spectra;
    for (const double c : control_values) {
        spectra.push_back(SpectralData::from_generator(controlled_drift(sys, c)));
    }

    ProbeResult result;
    for (const int cell : boundary) {
        const CylinderPoint p = grid.cell_center(cell);
        for (std::size_t ci = 0; ci < spectra.size(); ++ci) {
            for (const double tau : step_times) {
                if (result.evaluations >= trials) return result;
                ++result.evaluations;
                const CylinderPoint q = induced_flow_closed(tau, p, spectra[ci]);
                const int target = grid.locate(q);
                if (target == grid.sink_id()) {
                    ++result.sink_escapes;
                    continue;
                }
                if (!in_d(target)) {
                    result.witness = EscapeWitness{cell, control_values[ci], tau, q, target};
                    return result;
                }
            }
        }
    }
    return result;
}

} // namespace liectrl

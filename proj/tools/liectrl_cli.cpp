#include "liectrl/io.hpp"
#include "liectrl/jordan.hpp"
#include "liectrl/oracles.hpp"
#include "liectrl/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace liectrl;

Eigen::MatrixXd parse_matrix_arg(const std::string& text, int n) {
    std::vector<double> values;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) values.push_back(std::stod(item));
    if (static_cast<int>(values.size()) != n * n) {
        throw std::runtime_error("matrix argument needs " + std::to_string(n * n) +
                                 " comma-separated row-major entries");
    }
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = values[static_cast<std::size_t>(i * n + j)];
    }
    return m;
}

void print_matrix(std::ostream& os, const std::string& name, const Eigen::MatrixXd& m) {
    os << name << " =";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << (i == 0 ? " [" : "; ");
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) os << ", ";
            os << m(i, j);
        }
    }
    os << "]\n";
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

// The trajectory/cloud/cylinder CSV layouts are fixed 2x2 formats.
void require_sl2(const RunConfig& cfg, const std::string& subcommand) {
    if (cfg.n != 2) {
        throw std::runtime_error(subcommand + " requires an n = 2 configuration");
    }
}

int cmd_decompose(const RunConfig& cfg, const std::string& matrix_arg) {
    const Eigen::MatrixXd input =
        matrix_arg.empty() ? cfg.drift : parse_matrix_arg(matrix_arg, cfg.n);
    const AlgebraElement x(input, cfg.tolerances.struct_abs);
    const JordanParts parts = jordan_decompose(x);

    print_matrix(std::cout, "X", x.mat());
    print_matrix(std::cout, "elliptic", parts.elliptic.mat());
    print_matrix(std::cout, "hyperbolic", parts.hyperbolic.mat());
    print_matrix(std::cout, "nilpotent", parts.nilpotent.mat());
    const double reassembly =
        (parts.elliptic.mat() + parts.hyperbolic.mat() + parts.nilpotent.mat() - x.mat())
            .cwiseAbs()
            .maxCoeff();
    const double comm = std::max({bracket(parts.elliptic, parts.hyperbolic).norm_inf(),
                                  bracket(parts.elliptic, parts.nilpotent).norm_inf(),
                                  bracket(parts.hyperbolic, parts.nilpotent).norm_inf()});
    std::cout << "reassembly residual = " << reassembly << "\n";
    std::cout << "commutator residual = " << comm << "\n";

    std::ostringstream csv;
    csv << "part,entries,value\n";
    auto row = [&csv](const std::string& name, const Eigen::MatrixXd& m, double value) {
        csv << name << ',';
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                if (i + j > 0) csv << ' ';
                csv << fmt17(m(i, j));
            }
        }
        csv << ',' << fmt17(value) << '\n';
    };
    row("elliptic", parts.elliptic.mat(), reassembly);
    row("hyperbolic", parts.hyperbolic.mat(), reassembly);
    row("nilpotent", parts.nilpotent.mat(), comm);

    const EigenspaceSplit split = eigenspace_split(parts.hyperbolic, cfg.tolerances.zero_eig);
    auto describe = [&](const char* cls, const std::vector<TaggedVector>& vectors) {
        for (const auto& tv : vectors) {
            std::cout << cls << " (tag " << tv.tag << "): ";
            print_matrix(std::cout, "v", tv.element.mat());
            row(cls, tv.element.mat(), tv.tag);
        }
    };
    describe("positive", split.positive);
    describe("zero", split.zero);
    describe("negative", split.negative);

    write_file(out_path(cfg, "decompose.csv"), csv.str());
    std::cout << "wrote " << out_path(cfg, "decompose.csv") << "\n";
    return 0;
}

int cmd_check_conditions(const RunConfig& cfg) {
    const ConditionReport report =
        check_conditions(AlgebraElement(cfg.h, cfg.tolerances.struct_abs),
                         AlgebraElement(cfg.y.front(), cfg.tolerances.struct_abs), cfg.rho);
    std::cout << "condition 1 (H nonzero diagonal): " << (report.h_nonzero_diagonal ? "yes" : "no")
              << "\n";
    std::cout << "condition 2 (H_u hyperbolic on [-rho, rho]): "
              << (report.hu_real_distinct ? "yes" : "no") << "  max det(H_u) = "
              << report.max_det_hu << "\n";
    std::cout << "condition 3 (ad-rank basis): " << (report.ad_rank_basis ? "yes" : "no")
              << "  rank = " << report.rank << "\n";
    return report.all() ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg, const std::string& g_arg, const std::string& control_arg,
                 int samples) {
    require_sl2(cfg, "simulate");
    const LinearSystemSpec sys = cfg.system();
    const GroupElement g0 = g_arg.empty() ? GroupElement::identity(cfg.n)
                                          : GroupElement(parse_matrix_arg(g_arg, cfg.n),
                                                         cfg.tolerances.group_rel);
    const PiecewiseControl u = PiecewiseControl::parse(control_arg);
    const double total = u.total_duration();

    std::vector<std::pair<double, GroupElement>> trajectory;
    trajectory.reserve(static_cast<std::size_t>(samples) + 1);
    for (int k = 0; k <= samples; ++k) {
        const double t = total * static_cast<double>(k) / static_cast<double>(samples);
        trajectory.emplace_back(t, solve(sys, g0, u.fitted_to(t, sys.range.m)));
    }
    write_file(out_path(cfg, "trajectory.csv"), trajectory_csv(trajectory));

    const GroupElement final_g = trajectory.back().second;
    print_matrix(std::cout, "g(T)", final_g.mat());
    std::cout << "det drift = " << final_g.det_error() << "\n";
    std::cout << "wrote " << out_path(cfg, "trajectory.csv") << "\n";
    return 0;
}

int cmd_project(const RunConfig& cfg, const std::string& g_arg) {
    require_sl2(cfg, "project");
    const GroupElement g = g_arg.empty() ? GroupElement::identity(2)
                                         : GroupElement(parse_matrix_arg(g_arg, 2),
                                                        cfg.tolerances.group_rel);
    const CylinderPoint p = project(g);
    std::cout << "theta = " << p.theta() << "\nx = " << p.x() << "\n";
    write_file(out_path(cfg, "projection.csv"), cylinder_csv({p}));
    return 0;
}

int cmd_reachable(const RunConfig& cfg, double horizon, int n_points) {
    require_sl2(cfg, "reachable");
    const LinearSystemSpec sys = cfg.system();
    const ReachCloud cloud =
        reachable_cloud(sys, GroupElement::identity(cfg.n), horizon, n_points, cfg.seed);
    write_file(out_path(cfg, "reachable.csv"), cloud_csv(cloud));
    std::cout << "sampled " << cloud.points.size() << " reachable points within horizon "
              << horizon << "\n";
    std::cout << "wrote " << out_path(cfg, "reachable.csv") << "\n";
    return 0;
}

int cmd_circle_sets(const RunConfig& cfg, int samples) {
    require_sl2(cfg, "circle-sets");
    const auto arcs = circle_control_sets(cfg.cylinder_system(), cfg.rho, samples);
    for (const auto& arc : arcs) {
        std::cout << arc.label << ": [" << arc.lo << ", " << arc.hi << "] rad\n";
    }
    write_file(out_path(cfg, "circle_sets.csv"), arcs_csv(arcs));
    std::cout << "wrote " << out_path(cfg, "circle_sets.csv") << "\n";
    return 0;
}

int cmd_cylinder_sets(const RunConfig& cfg) {
    require_sl2(cfg, "cylinder-sets");
    const LinearSystemSpec cyl = cfg.cylinder_system();
    const CellGrid grid = cfg.grid();
    const ReachGraph graph =
        build_reach_graph(cyl, grid, cfg.tau, cfg.controls, cfg.pts_per_cell);
    const auto sets = extract_control_sets(graph, cfg.interior_threshold);

    for (const auto& cs : sets) {
        std::cout << cs.label << ": " << cs.cells.size() << " cells";
        if (!cs.contains.empty()) {
            std::cout << ", contains";
            for (const auto& name : cs.contains) std::cout << ' ' << name;
        }
        std::cout << "\n";
    }
    write_file(out_path(cfg, "cylinder_sets.csv"), cell_sets_csv(sets, grid));
    write_file(out_path(cfg, "cylinder_sets.svg"), cell_sets_svg(sets, grid));
    std::cout << "wrote " << out_path(cfg, "cylinder_sets.csv") << " and "
              << out_path(cfg, "cylinder_sets.svg") << "\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    require_sl2(cfg, "verify");
    const VerifyReport report = run_verify(cfg);
    report.print(std::cout);
    write_file(out_path(cfg, "verify_report.csv"), report.csv());
    std::cout << "wrote " << out_path(cfg, "verify_report.csv") << "\n";
    return report.all_passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear control systems on SL(2): flows, cylinder projection and "
                 "set-oriented control set estimation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "configuration file (defaults built in)");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed, "random seed (overrides config)")
        ->each([&seed_set](const std::string&) { seed_set = true; });

    auto* decompose = app.add_subcommand("decompose", "drift decomposition and eigenspace split");
    std::string matrix_arg;
    decompose->add_option("--matrix", matrix_arg, "row-major entries a,b,c,d (default: drift)");

    app.add_subcommand("check-conditions", "evaluate the three structural conditions");

    auto* simulate = app.add_subcommand("simulate", "solve the system along a control");
    std::string g_arg;
    std::string control_arg = "1:0";
    int samples = 100;
    simulate->add_option("--g", g_arg, "initial point, row-major a,b,c,d (default: identity)");
    simulate->add_option("--control", control_arg, "piecewise control tau:c;tau:c;...");
    simulate->add_option("--samples", samples, "trajectory samples")->check(CLI::PositiveNumber);

    auto* project_cmd = app.add_subcommand("project", "project a group element to the cylinder");
    std::string project_g;
    project_cmd->add_option("--g", project_g, "row-major a,b,c,d (default: identity)");

    auto* reachable = app.add_subcommand("reachable", "sample the reachable set from identity");
    double horizon = 2.0;
    int n_points = 500;
    reachable->add_option("--horizon", horizon, "time horizon")->check(CLI::PositiveNumber);
    reachable->add_option("--n-points", n_points, "sample count")->check(CLI::PositiveNumber);

    auto* circle = app.add_subcommand("circle-sets", "closed-form circle control sets");
    int circle_samples = 41;
    circle->add_option("--samples", circle_samples, "control samples across [-rho, rho]")
        ->check(CLI::Range(2, 100000));

    app.add_subcommand("cylinder-sets", "cell-mapping control set estimation on the cylinder");
    app.add_subcommand("verify", "run the verification suite");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = config_path.empty() ? RunConfig::defaults() : parse_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_set) cfg.seed = seed;

        if (decompose->parsed()) return cmd_decompose(cfg, matrix_arg);
        if (app.got_subcommand("check-conditions")) return cmd_check_conditions(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg, g_arg, control_arg, samples);
        if (project_cmd->parsed()) return cmd_project(cfg, project_g);
        if (reachable->parsed()) return cmd_reachable(cfg, horizon, n_points);
        if (circle->parsed()) return cmd_circle_sets(cfg, circle_samples);
        if (app.got_subcommand("cylinder-sets")) return cmd_cylinder_sets(cfg);
        if (app.got_subcommand("verify")) return cmd_verify(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

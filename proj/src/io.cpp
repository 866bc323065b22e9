#include "liectrl/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace liectrl {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trajectory_csv(const std::vector<std::pair<double, GroupElement>>& samples) {
    std::ostringstream os;
    os << "t,g11,g12,g21,g22\n";
    for (const auto& [t, g] : samples) {
        os << fmt17(t) << ',' << fmt17(g(0, 0)) << ',' << fmt17(g(0, 1)) << ','
           << fmt17(g(1, 0)) << ',' << fmt17(g(1, 1)) << '\n';
    }
    return os.str();
}

std::string cloud_csv(const ReachCloud& cloud) {
    std::ostringstream os;
    os << "t,g11,g12,g21,g22,control\n";
    for (const auto& cp : cloud.points) {
        const GroupElement& g = cp.point;
        os << fmt17(cp.control.total_duration()) << ',' << fmt17(g(0, 0)) << ','
           << fmt17(g(0, 1)) << ',' << fmt17(g(1, 0)) << ',' << fmt17(g(1, 1)) << ','
           << cp.control.serialize() << '\n';
    }
    return os.str();
}

std::string cylinder_csv(const std::vector<CylinderPoint>& points) {
    std::ostringstream os;
    os << "theta,x\n";
    for (const auto& p : points) {
        os << fmt17(p.theta()) << ',' << fmt17(p.x()) << '\n';
    }
    return os.str();
}

std::string arcs_csv(const std::vector<CircleArc>& arcs) {
    std::ostringstream os;
    os << "label,lo,hi\n";
    for (const auto& arc : arcs) {
        os << arc.label << ',' << fmt17(arc.lo) << ',' << fmt17(arc.hi) << '\n';
    }
    return os.str();
}

std::string cell_sets_csv(const std::vector<ControlSetApprox>& sets, const CellGrid& grid) {
    std::ostringstream os;
    os << "label,i_theta,i_x,theta_center,x_center\n";
    for (const auto& cs : sets) {
        for (const int cell : cs.cells) {
            const auto [it, ix] = grid.cell_coords(cell);
            const double theta_c = (static_cast<double>(it) + 0.5) * grid.dtheta();
            const double x_c = grid.x_min + (static_cast<double>(ix) + 0.5) * grid.dx();
            os << cs.label << ',' << it << ',' << ix << ',' << fmt17(theta_c) << ','
               << fmt17(x_c) << '\n';
        }
    }
    return os.str();
}

std::string cell_sets_svg(const std::vector<ControlSetApprox>& sets, const CellGrid& grid) {
    constexpr double kWidth = 900.0;
    constexpr double kHeight = 450.0;
    constexpr double kMargin = 40.0;
    const double plot_w = kWidth - 2 * kMargin;
    const double plot_h = kHeight - 2 * kMargin;
    const double two_pi = 2.0 * std::numbers::pi;

    auto px = [&](double theta) { return kMargin + theta / two_pi * plot_w; };
    auto py = [&](double x) {
        return kMargin + (grid.x_max - x) / (grid.x_max - grid.x_min) * plot_h;
    };

    static const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                          "#ff7f0e", "#8c564b", "#17becf", "#bcbd22"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << plot_w
       << "\" height=\"" << plot_h << "\" fill=\"white\" stroke=\"black\"/>\n";

    const double cell_w = plot_w / grid.n_theta;
    const double cell_h = plot_h / grid.n_x;
    for (std::size_t s = 0; s < sets.size(); ++s) {
        const char* color = palette[s % std::size(palette)];
        os << "<g fill=\"" << color << "\" fill-opacity=\"0.85\">\n";
        for (const int cell : sets[s].cells) {
            const auto [it, ix] = grid.cell_coords(cell);
            const double x0 = px(it * grid.dtheta());
            const double y0 = py(grid.x_min + (ix + 1) * grid.dx());
            os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << cell_w
               << "\" height=\"" << cell_h << "\"/>\n";
        }
        os << "</g>\n";
        // legend entry
        const double ly = kMargin / 2.0;
        const double lx = kMargin + static_cast<double>(s) * 130.0;
        os << "<rect x=\"" << lx << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"12\" fill=\""
           << color << "\"/>\n";
        os << "<text x=\"" << lx + 16 << "\" y=\"" << ly + 2 << "\" font-size=\"13\">"
           << sets[s].label << "</text>\n";
    }

    const double mark[][2] = {{0.0, 0.0}, {std::numbers::pi, 0.0}};
    for (const auto& m : mark) {
        os << "<circle cx=\"" << px(m[0]) << "\" cy=\"" << py(m[1])
           << "\" r=\"4\" fill=\"black\" stroke=\"white\"/>\n";
    }
    os << "<text x=\"" << px(0.0) + 6 << "\" y=\"" << py(0.0) - 6
       << "\" font-size=\"12\">(0,0)</text>\n";
    os << "<text x=\"" << px(std::numbers::pi) + 6 << "\" y=\"" << py(0.0) - 6
       << "\" font-size=\"12\">(pi,0)</text>\n";
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << content;
}

} // namespace liectrl

#include "liectrl/config.hpp"

#include "liectrl/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace liectrl {

namespace {

struct Entry {
    int line;
    std::string value;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& message) {
    std::ostringstream os;
    os << path << ":" << line << ": " << message;
    throw std::runtime_error(os.str());
}

double parse_real(const std::string& path, int line, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        fail(path, line, "expected a real number, got '" + text + "'");
    }
    if (trim(text.substr(used)) != "") {
        fail(path, line, "trailing characters after number: '" + text + "'");
    }
    return v;
}

long long parse_int(const std::string& path, int line, const std::string& text) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        fail(path, line, "expected an integer, got '" + text + "'");
    }
    if (trim(text.substr(used)) != "") {
        fail(path, line, "trailing characters after integer: '" + text + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& path, int line, const std::string& text) {
    std::string body = trim(text);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
        fail(path, line, "expected a bracketed list like [1, 0, 0, -1]");
    }
    body = body.substr(1, body.size() - 2);
    std::vector<double> values;
    std::istringstream is(body);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(path, line, "empty entry in list");
        values.push_back(parse_real(path, line, item));
    }
    if (values.empty()) fail(path, line, "list must not be empty");
    return values;
}

Eigen::MatrixXd parse_matrix(const std::string& path, int line, const std::string& text, int n) {
    const std::vector<double> values = parse_list(path, line, text);
    if (static_cast<int>(values.size()) != n * n) {
        std::ostringstream os;
        os << "matrix needs " << n * n << " row-major entries for n = " << n << ", got "
           << values.size();
        fail(path, line, os.str());
    }
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = values[static_cast<std::size_t>(i * n + j)];
        }
    }
    return m;
}

void check_traceless(const std::string& path, int line, const Eigen::MatrixXd& m, double tol) {
    if (std::abs(m.trace()) > tol) {
        std::ostringstream os;
        os << "matrix not traceless: trace = " << m.trace();
        fail(path, line, os.str());
    }
}

const char* const kKnownKeys[] = {"n",       "drift",       "H",          "Y",
                                  "rho",     "tau",         "controls",   "n_theta",
                                  "n_x",     "x_min",       "x_max",      "pts_per_cell",
                                  "interior_threshold",     "seed",       "out_dir",
                                  "tol.struct_abs",         "tol.group_rel",
                                  "tol.zero_eig",           "tol.steer"};

} // namespace

RunConfig RunConfig::defaults() {
    RunConfig cfg;
    cfg.drift = Eigen::Matrix2d{{1.0, 0.0}, {0.0, -1.0}};
    cfg.h = cfg.drift;
    cfg.y.push_back(Eigen::Matrix2d{{1.0, 1.0}, {0.5, -1.0}});
    cfg.controls = {-cfg.rho, -cfg.rho / 2.0, 0.0, cfg.rho / 2.0, cfg.rho};
    return cfg;
}

LinearSystemSpec RunConfig::system() const {
    std::vector<AlgebraElement> fields;
    fields.reserve(y.size());
    for (const auto& m : y) fields.emplace_back(m, tolerances.struct_abs);
    return LinearSystemSpec(AlgebraElement(drift, tolerances.struct_abs), std::move(fields),
                            ControlRange(rho, static_cast<int>(y.size())));
}

LinearSystemSpec RunConfig::cylinder_system() const {
    std::vector<AlgebraElement> fields;
    fields.reserve(y.size());
    for (const auto& m : y) fields.emplace_back(m, tolerances.struct_abs);
    return LinearSystemSpec(AlgebraElement(h, tolerances.struct_abs), std::move(fields),
                            ControlRange(rho, static_cast<int>(y.size())));
}

CellGrid RunConfig::grid() const {
    return CellGrid(n_theta, n_x, x_min, x_max);
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }

    std::map<std::string, Entry> entries;
    std::vector<Entry> y_entries;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(path, line_no, "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(path, line_no, "missing key before '='");
        if (value.empty()) fail(path, line_no, "missing value for key '" + key + "'");
        if (std::find_if(std::begin(kKnownKeys), std::end(kKnownKeys),
                         [&key](const char* k) { return key == k; }) == std::end(kKnownKeys)) {
            fail(path, line_no, "unknown key '" + key + "'");
        }
        if (key == "Y") {
            y_entries.push_back({line_no, value});
            continue;
        }
        if (entries.count(key)) {
            fail(path, line_no, "duplicate key '" + key + "'");
        }
        entries[key] = {line_no, value};
    }

    RunConfig cfg = RunConfig::defaults();
    cfg.y.clear();
    cfg.controls.clear();

    auto take = [&entries](const std::string& key) -> const Entry* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    if (const Entry* e = take("n")) {
        cfg.n = static_cast<int>(parse_int(path, e->line, e->value));
        if (cfg.n < 2) fail(path, e->line, "n must be at least 2");
    }

    if (const Entry* e = take("tol.struct_abs")) {
        cfg.tolerances.struct_abs = parse_real(path, e->line, e->value);
        if (!(cfg.tolerances.struct_abs > 0.0)) fail(path, e->line, "tolerance must be positive");
    }
    if (const Entry* e = take("tol.group_rel")) {
        cfg.tolerances.group_rel = parse_real(path, e->line, e->value);
        if (!(cfg.tolerances.group_rel > 0.0)) fail(path, e->line, "tolerance must be positive");
    }
    if (const Entry* e = take("tol.zero_eig")) {
        cfg.tolerances.zero_eig = parse_real(path, e->line, e->value);
        if (!(cfg.tolerances.zero_eig > 0.0)) fail(path, e->line, "tolerance must be positive");
    }
    if (const Entry* e = take("tol.steer")) {
        cfg.tolerances.steer = parse_real(path, e->line, e->value);
        if (!(cfg.tolerances.steer > 0.0)) fail(path, e->line, "tolerance must be positive");
    }

    const Entry* drift_entry = take("drift");
    if (drift_entry == nullptr) {
        throw std::runtime_error(path + ": missing required key 'drift'");
    }
    cfg.drift = parse_matrix(path, drift_entry->line, drift_entry->value, cfg.n);
    check_traceless(path, drift_entry->line, cfg.drift, cfg.tolerances.struct_abs);

    if (y_entries.empty()) {
        throw std::runtime_error(path + ": missing required key 'Y' (at least one control field)");
    }
    for (const auto& e : y_entries) {
        Eigen::MatrixXd m = parse_matrix(path, e.line, e.value, cfg.n);
        check_traceless(path, e.line, m, cfg.tolerances.struct_abs);
        cfg.y.push_back(std::move(m));
    }

    const Entry* rho_entry = take("rho");
    if (rho_entry == nullptr) {
        throw std::runtime_error(path + ": missing required key 'rho'");
    }
    cfg.rho = parse_real(path, rho_entry->line, rho_entry->value);
    if (!(cfg.rho > 0.0)) fail(path, rho_entry->line, "rho must be positive");

    if (const Entry* e = take("H")) {
        cfg.h = parse_matrix(path, e->line, e->value, cfg.n);
        check_traceless(path, e->line, cfg.h, cfg.tolerances.struct_abs);
    } else {
        cfg.h = jordan_decompose(AlgebraElement(cfg.drift, cfg.tolerances.struct_abs))
                    .hyperbolic.mat();
    }

    if (const Entry* e = take("tau")) {
        cfg.tau = parse_real(path, e->line, e->value);
        if (!(cfg.tau > 0.0)) fail(path, e->line, "tau must be positive");
    }
    if (const Entry* e = take("controls")) {
        cfg.controls = parse_list(path, e->line, e->value);
        for (const double c : cfg.controls) {
            if (std::abs(c) > cfg.rho + 1e-12) {
                fail(path, e->line, "control value outside [-rho, rho]");
            }
        }
    } else {
        cfg.controls = {-cfg.rho, -cfg.rho / 2.0, 0.0, cfg.rho / 2.0, cfg.rho};
    }
    if (const Entry* e = take("n_theta")) {
        cfg.n_theta = static_cast<int>(parse_int(path, e->line, e->value));
        if (cfg.n_theta < 2 || cfg.n_theta % 2 != 0) {
            fail(path, e->line, "n_theta must be even and positive");
        }
    }
    if (const Entry* e = take("n_x")) {
        cfg.n_x = static_cast<int>(parse_int(path, e->line, e->value));
        if (cfg.n_x < 1) fail(path, e->line, "n_x must be positive");
    }
    if (const Entry* e = take("x_min")) cfg.x_min = parse_real(path, e->line, e->value);
    if (const Entry* e = take("x_max")) cfg.x_max = parse_real(path, e->line, e->value);
    if (!(cfg.x_min < cfg.x_max)) {
        throw std::runtime_error(path + ": x window must satisfy x_min < x_max");
    }
    if (const Entry* e = take("pts_per_cell")) {
        cfg.pts_per_cell = static_cast<int>(parse_int(path, e->line, e->value));
        if (cfg.pts_per_cell < 1) fail(path, e->line, "pts_per_cell must be positive");
    }
    if (const Entry* e = take("interior_threshold")) {
        cfg.interior_threshold = static_cast<int>(parse_int(path, e->line, e->value));
        if (cfg.interior_threshold < 1) fail(path, e->line, "interior_threshold must be positive");
    }
    if (const Entry* e = take("seed")) {
        cfg.seed = static_cast<std::uint64_t>(parse_int(path, e->line, e->value));
    }
    if (const Entry* e = take("out_dir")) {
        cfg.out_dir = e->value;
    }
    return cfg;
}

std::string default_config_text() {
    return R"(# Default configuration: linear control system on SL(2) with diagonal
# drift and one control field, analyzed on the cylinder S^1 x R.

n = 2
drift = [1, 0, 0, -1]
H = [1, 0, 0, -1]
Y = [1, 1, 0.5, -1]
rho = 0.1

# Cell-mapping parameters.
tau = 0.25
controls = [-0.1, -0.05, 0, 0.05, 0.1]
n_theta = 256
n_x = 128
x_min = -3
x_max = 3
pts_per_cell = 5
interior_threshold = 4

seed = 20250809
out_dir = out

tol.struct_abs = 1e-12
tol.group_rel = 1e-9
tol.zero_eig = 1e-8
tol.steer = 0.05
)";
}

} // namespace liectrl

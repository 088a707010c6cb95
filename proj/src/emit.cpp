/*
 Copyright 2026 The mixform Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "mixform/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "mixform/kinematics.hpp"

namespace mixform {

using nlohmann::json;

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::vector<std::string> csv_header(std::size_t n_agents, std::size_t n_edges) {
    std::vector<std::string> cols{"t"};
    for (std::size_t i = 1; i <= n_agents; ++i) {
        const std::string id = std::to_string(i);
        for (const char* pattern : {"q#_1", "q#_2", "dq#_1", "dq#_2", "x#", "y#", "u#_1", "u#_2"}) {
            std::string name(pattern);
            name.replace(name.find('#'), 1, id);
            cols.push_back(name);
        }
    }
    for (std::size_t k = 1; k <= n_edges; ++k) {
        cols.push_back("e_" + std::to_string(k));
    }
    cols.push_back("xi_norm");
    cols.push_back("U");
    return cols;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
    const auto header = csv_header(log.n_agents, log.n_edges);
    for (std::size_t c = 0; c < header.size(); ++c) {
        out << (c ? "," : "") << header[c];
    }
    out << '\n';
    std::string line;
    for (const LogSample& s : log.samples) {
        line.clear();
        line += format_double(s.t);
        auto put = [&line](double v) {
            line += ',';
            line += format_double(v);
        };
        for (std::size_t i = 0; i < log.n_agents; ++i) {
            put(s.joints[i].q(0));
            put(s.joints[i].q(1));
            put(s.joints[i].qdot(0));
            put(s.joints[i].qdot(1));
            put(s.x[i](0));
            put(s.x[i](1));
            put(s.u[i](0));
            put(s.u[i](1));
        }
        for (Eigen::Index k = 0; k < s.e.size(); ++k) {
            put(s.e(k));
        }
        put(s.xi_norm);
        put(s.lyapunov);
        line += '\n';
        out << line;
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') {
            cell.pop_back();
        }
        out.push_back(cell);
    }
    return out;
}

double parse_cell(const std::string& cell, std::size_t row) {
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw ValidationError("trajectory CSV row " + std::to_string(row) + ": cannot parse '" + cell + "'");
    }
    return v;
}

} // namespace

TrajectoryLog read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("trajectory CSV is empty");
    }
    const auto header = split(line);
    std::size_t n_edges = 0;
    for (const auto& name : header) {
        if (name.rfind("e_", 0) == 0) {
            ++n_edges;
        }
    }
    if (header.size() < 3 + n_edges || (header.size() - 3 - n_edges) % 8 != 0) {
        throw ValidationError("trajectory CSV header has an unexpected column count");
    }
    TrajectoryLog log;
    log.n_agents = (header.size() - 3 - n_edges) / 8;
    log.n_edges = n_edges;
    if (header != csv_header(log.n_agents, log.n_edges)) {
        throw ValidationError("trajectory CSV header does not match the column contract");
    }

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw ValidationError("trajectory CSV row " + std::to_string(row) + " has " +
                                  std::to_string(cells.size()) + " columns, expected " +
                                  std::to_string(header.size()));
        }
        std::size_t c = 0;
        auto next = [&] { return parse_cell(cells[c++], row); };
        LogSample s;
        s.t = next();
        for (std::size_t i = 0; i < log.n_agents; ++i) {
            JointState j;
            j.q(0) = next();
            j.q(1) = next();
            j.qdot(0) = next();
            j.qdot(1) = next();
            s.joints.push_back(j);
            const double x = next();
            const double y = next();
            s.x.emplace_back(x, y);
            const double u1 = next();
            const double u2 = next();
            s.u.emplace_back(u1, u2);
        }
        s.e.resize(static_cast<Eigen::Index>(n_edges));
        for (std::size_t k = 0; k < n_edges; ++k) {
            s.e(static_cast<Eigen::Index>(k)) = next();
        }
        s.xi_norm = next();
        s.lyapunov = next();
        log.samples.push_back(std::move(s));
    }
    return log;
}

TrajectoryLog read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open trajectory CSV " + path.string());
    }
    return read_trajectory_csv(in);
}

namespace {

json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

} // namespace

std::string summary_json(const Scenario& scenario, const TrajectoryLog& log, const RunSummary& summary,
                         const VerificationReport& report) {
    json doc;
    doc["scenario"] = scenario.name;
    doc["t_final"] = summary.t_final;
    doc["final_edge_errors"] = std::vector<double>(summary.final_e.data(),
                                                   summary.final_e.data() + summary.final_e.size());
    json final_q = json::array();
    for (const auto& q : summary.final_q) {
        final_q.push_back({q(0), q(1)});
    }
    doc["final_q"] = final_q;
    doc["final_xi_norm"] = summary.final_xi_norm;
    doc["final_lyapunov"] = summary.final_lyapunov;

    json agents = json::array();
    for (std::size_t i = 0; i < log.n_agents; ++i) {
        const bool pa = i < log.modes.size() && log.modes[i] == Actuation::PassiveActive;
        json a;
        a["index"] = i + 1;
        a["mode"] = pa ? "pa" : "fa";
        a["margin_kind"] = pa ? "abs_Jbar1_Jbar2" : "abs_det_J";
        a["min_singularity_margin"] =
            i < summary.min_margin.size() ? finite_or_null(summary.min_margin[i]) : json(nullptr);
        if (pa) {
            a["max_holonomy_drift"] = summary.max_drift[i];
            a["max_momentum_residual"] = summary.max_momentum[i];
        }
        agents.push_back(a);
    }
    doc["agents"] = agents;
    doc["lyapunov_violations"] = summary.lyapunov_violations;
    doc["singularity_flagged"] = summary.singularity_flagged;

    json monitors = json::array();
    for (const MonitorVerdict& m : report.monitors) {
        monitors.push_back({
            {"name", m.name},
            {"evaluated", m.evaluated},
            {"passed", m.passed},
            {"worst", finite_or_null(m.worst)},
            {"tolerance", m.tolerance},
            {"first_failure_sample", m.first_failure ? json(*m.first_failure) : json(nullptr)},
        });
    }
    doc["monitors"] = monitors;
    doc["verified"] = report.passed();
    return doc.dump(2) + "\n";
}

namespace {

struct Series {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
    std::string color;
    bool dashed = false;
    bool endpoint_markers = false;  // x at the first point, o at the last
};

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    return colors[i % 8];
}

// Keeps at most max_points, always including both ends.
void decimate(Series& s, std::size_t max_points = 2000) {
    if (s.xs.size() <= max_points) {
        return;
    }
    const std::size_t stride = (s.xs.size() + max_points - 1) / max_points;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < s.xs.size(); i += stride) {
        xs.push_back(s.xs[i]);
        ys.push_back(s.ys[i]);
    }
    if (xs.back() != s.xs.back() || ys.back() != s.ys.back()) {
        xs.push_back(s.xs.back());
        ys.push_back(s.ys.back());
    }
    s.xs = std::move(xs);
    s.ys = std::move(ys);
}

std::string chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                  std::vector<Series> series, bool equal_aspect) {
    const double width = 720.0, height = 480.0, left = 70.0, right = 150.0, top = 40.0, bottom = 50.0;
    const double pw = width - left - right, ph = height - top - bottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (Series& s : series) {
        decimate(s);
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (std::isfinite(s.xs[i]) && std::isfinite(s.ys[i])) {
                xmin = std::min(xmin, s.xs[i]);
                xmax = std::max(xmax, s.xs[i]);
                ymin = std::min(ymin, s.ys[i]);
                ymax = std::max(ymax, s.ys[i]);
            }
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    }
    if (xmax - xmin < 1e-12) {
        xmin -= 0.5, xmax += 0.5;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5, ymax += 0.5;
    }
    const double xpad = 0.05 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
    xmin -= xpad, xmax += xpad, ymin -= ypad, ymax += ypad;
    double sx = pw / (xmax - xmin), sy = ph / (ymax - ymin);
    if (equal_aspect) {
        sx = sy = std::min(sx, sy);
    }
    auto px = [&](double x) { return left + (x - xmin) * sx; };
    auto py = [&](double y) { return top + ph - (y - ymin) * sy; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << left << "\" y=\"24\" font-size=\"15\">" << title << "</text>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 4.0;
        const double yv = ymin + (ymax - ymin) * t / 4.0;
        svg << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
            << format_double(std::round(xv * 1e4) / 1e4) << "</text>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
            << format_double(std::round(yv * 1e4) / 1e4) << "</text>\n";
    }
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
        << xlabel << "</text>\n";
    svg << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 " << top + ph / 2
        << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    svg << "<clipPath id=\"plot\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw
        << "\" height=\"" << ph << "\"/></clipPath>\n";

    for (std::size_t n = 0; n < series.size(); ++n) {
        const Series& s = series[n];
        svg << "<polyline clip-path=\"url(#plot)\" fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            svg << px(s.xs[i]) << ',' << py(s.ys[i]) << ' ';
        }
        svg << "\"/>\n";
        if (s.endpoint_markers && !s.xs.empty()) {
            const double x0 = px(s.xs.front()), y0 = py(s.ys.front());
            svg << "<path d=\"M" << x0 - 5 << ' ' << y0 - 5 << " L" << x0 + 5 << ' ' << y0 + 5 << " M"
                << x0 - 5 << ' ' << y0 + 5 << " L" << x0 + 5 << ' ' << y0 - 5 << "\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\"/>\n";
            svg << "<circle cx=\"" << px(s.xs.back()) << "\" cy=\"" << py(s.ys.back())
                << "\" r=\"5\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
        }
        const double ly = top + 14.0 + 18.0 * static_cast<double>(n);
        svg << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 30
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
            << (s.dashed ? " stroke-dasharray=\"4,3\"" : "") << "/>\n";
        svg << "<text x=\"" << left + pw + 36 << "\" y=\"" << ly << "\">" << s.label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed while writing " + path.string());
    }
}

std::vector<double> times(const TrajectoryLog& log) {
    std::vector<double> t;
    for (const auto& s : log.samples) {
        t.push_back(s.t);
    }
    return t;
}

std::string paths_plot(const Scenario& scenario, const TrajectoryLog& log) {
    std::vector<Series> series;
    for (std::size_t i = 0; i < log.n_agents; ++i) {
        Series s{"EE " + std::to_string(i + 1), {}, {}, palette(i), false, true};
        double q2_lo = std::numeric_limits<double>::infinity(), q2_hi = -q2_lo;
        for (const auto& sample : log.samples) {
            s.xs.push_back(sample.x[i](0));
            s.ys.push_back(sample.x[i](1));
            q2_lo = std::min(q2_lo, sample.joints[i].q(1));
            q2_hi = std::max(q2_hi, sample.joints[i].q(1));
        }
        series.push_back(std::move(s));

        const AgentSpec& spec = scenario.agents[i];
        if (spec.mode == Actuation::PassiveActive && std::isfinite(q2_lo)) {
            // Part of the one-dimensional workspace around the visited stretch of the curve.
            const HolonomicBranch branch = holonomic_branch(alphas(spec.params), spec.initial);
            Series curve{"PA " + std::to_string(i + 1) + " curve", {}, {}, palette(i), true, false};
            const double lo = q2_lo - 0.15, hi = q2_hi + 0.15;
            for (int n = 0; n <= 200; ++n) {
                const double q2 = lo + (hi - lo) * n / 200.0;
                const Eigen::Vector2d p = fk(spec.params, {f_of_q2(branch, q2), q2}, spec.base);
                curve.xs.push_back(p(0));
                curve.ys.push_back(p(1));
            }
            series.push_back(std::move(curve));
        }
    }
    return chart("End-effector paths (x start, o end)", "X [m]", "Y [m]", std::move(series), true);
}

std::string errors_plot(const TrajectoryLog& log) {
    std::vector<Series> series;
    const auto t = times(log);
    for (std::size_t k = 0; k < log.n_edges; ++k) {
        Series s{"e_" + std::to_string(k + 1), t, {}, palette(k), false, false};
        for (const auto& sample : log.samples) {
            s.ys.push_back(sample.e(static_cast<Eigen::Index>(k)));
        }
        series.push_back(std::move(s));
    }
    return chart("Squared-distance errors", "t [s]", "e_k [m^2]", std::move(series), false);
}

std::string lyapunov_plot(const TrajectoryLog& log) {
    const auto t = times(log);
    Series u{"log10 U", t, {}, palette(0), false, false};
    Series xi{"log10 |xi|", t, {}, palette(1), false, false};
    for (const auto& sample : log.samples) {
        u.ys.push_back(std::log10(std::max(sample.lyapunov, 1e-300)));
        xi.ys.push_back(std::log10(std::max(sample.xi_norm, 1e-300)));
    }
    return chart("Lyapunov function and actuated joint rates", "t [s]", "log10", {u, xi}, false);
}

std::string joints_plot(const TrajectoryLog& log) {
    std::vector<Series> series;
    const auto t = times(log);
    for (std::size_t i = 0; i < log.n_agents; ++i) {
        for (int j = 0; j < 2; ++j) {
            Series s{"q" + std::to_string(i + 1) + "_" + std::to_string(j + 1), t, {},
                     palette(2 * i + static_cast<std::size_t>(j)), j == 0, false};
            for (const auto& sample : log.samples) {
                s.ys.push_back(sample.joints[i].q(j));
            }
            series.push_back(std::move(s));
        }
    }
    return chart("Joint positions", "t [s]", "q [rad]", std::move(series), false);
}

} // namespace

RunArtifacts emit(const Scenario& scenario, const TrajectoryLog& log, const std::filesystem::path& out_dir,
                  bool svg) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
    }
    RunArtifacts artifacts;
    artifacts.trajectory_csv = out_dir / "trajectory.csv";
    {
        std::ostringstream csv;
        write_trajectory_csv(csv, log);
        write_file(artifacts.trajectory_csv, csv.str());
    }
    artifacts.summary_json = out_dir / "summary.json";
    write_file(artifacts.summary_json, summary_json(scenario, log, summarize(log), verify_run(log)));

    if (svg) {
        const std::pair<const char*, std::string> plots[] = {
            {"paths.svg", paths_plot(scenario, log)},
            {"errors.svg", errors_plot(log)},
            {"lyapunov.svg", lyapunov_plot(log)},
            {"joints.svg", joints_plot(log)},
        };
        for (const auto& [name, content] : plots) {
            artifacts.plots.push_back(out_dir / name);
            write_file(artifacts.plots.back(), content);
        }
    }
    return artifacts;
}

} // namespace mixform

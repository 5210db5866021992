#include "invdes/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace invdes::io {

namespace {

void fail(const std::string& what) { throw std::invalid_argument(what); }

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

SampledProfile read_profile_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) fail("empty profile CSV");
    // Tolerate an optional header; data lines must be "x,value".
    auto parse_row = [](const std::string& s, double& x, double& v) {
        const auto comma = s.find(',');
        if (comma == std::string::npos) return false;
        try {
            std::size_t used = 0;
            x = std::stod(s.substr(0, comma), &used);
            v = std::stod(s.substr(comma + 1), &used);
        } catch (const std::exception&) {
            return false;
        }
        return true;
    };

    std::vector<double> xs, vs;
    double x, v;
    if (parse_row(line, x, v)) {
        xs.push_back(x);
        vs.push_back(v);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!parse_row(line, x, v)) fail("malformed CSV row: \"" + line + "\"");
        xs.push_back(x);
        vs.push_back(v);
    }
    if (xs.size() < 2) fail("profile CSV needs at least 2 rows");

    const double dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    if (!(dx > 0.0)) fail("profile CSV abscissae must increase");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double step = xs[i] - xs[i - 1];
        if (std::abs(step - dx) > 1e-9 * std::max(std::abs(dx), 1.0))
            fail("profile CSV grid is not uniform at row " + std::to_string(i + 1));
    }
    return SampledProfile(Grid(xs.front() - dx, dx, static_cast<int>(xs.size())),
                          std::move(vs));
}

SampledProfile read_profile_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open profile CSV \"" + path + "\"");
    return read_profile_csv(in);
}

void write_profile_csv(std::ostream& out, const SampledProfile& u) {
    out << "x,value\n";
    for (int i = 0; i < u.grid.n; ++i)
        out << format_double(u.grid.node(i + 1)) << ','
            << format_double(u.values[i]) << '\n';
}

void write_profile_csv_file(const std::string& path, const SampledProfile& u) {
    std::ofstream out(path);
    if (!out) fail("cannot write profile CSV \"" + path + "\"");
    write_profile_csv(out, u);
}

SpeedLaw make_speed_law(const json& spec, double rho_bar) {
    const std::string kind = spec.value("kind", "greenshields");
    if (kind == "greenshields") {
        return greenshields_law(spec.value("v_max", 1.0), spec.value("R", 1.0),
                                rho_bar);
    }
    if (kind == "table") {
        std::vector<std::pair<double, double>> samples;
        for (const auto& row : spec.at("samples"))
            samples.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
        return speed_law_from_table(samples, rho_bar);
    }
    fail("unknown speed law kind \"" + kind + "\"");
    return {};
}

TrafficFlux make_traffic_flux(const json& spec) {
    const double rho_bar = spec.at("rho_bar").get<double>();
    const json speed = spec.contains("speed") ? spec.at("speed") : json::object();
    return flux_from_speed(make_speed_law(speed, rho_bar));
}

FluxModel make_flux(const json& spec) {
    if (spec.is_string()) return make_flux(json{{"kind", spec.get<std::string>()}});
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "burgers") return make_burgers_flux();
    if (kind == "table") {
        std::vector<std::pair<double, double>> samples;
        for (const auto& row : spec.at("samples"))
            samples.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
        return make_table_flux(samples);
    }
    if (kind == "traffic") return make_traffic_flux(spec).flux;
    fail("unknown flux kind \"" + kind + "\"");
    return make_burgers_flux();
}

json oleinik_verdict_json(const OleinikVerdict& v) {
    return json{{"reachable", v.ok},
                {"worst_pair", {v.xi, v.xj}},
                {"ratio", v.ratio},
                {"bound", v.bound}};
}

json membership_verdict_json(const MembershipVerdict& v) {
    json j{{"member", v.member}};
    if (!v.member) {
        j["reason"] = v.reason;
        j["witness"] = v.witness;
        j["excess"] = v.excess;
    }
    return j;
}

void write_envelope_csv(std::ostream& out, const DesignEnvelope& env) {
    out << "x,u_flat,u_sharp,U_flat,U_sharp\n";
    const Grid& g = env.grid_o;
    for (int i = 0; i < g.n; ++i) {
        const double us = env.has_sharp ? env.u_sharp.values[i] : env.u_flat.values[i];
        const double Us = env.has_sharp ? env.U_sharp.node_values[i + 1]
                                        : env.U_flat.node_values[i + 1];
        out << format_double(g.node(i + 1)) << ',' << format_double(env.u_flat.values[i])
            << ',' << format_double(us) << ','
            << format_double(env.U_flat.node_values[i + 1]) << ',' << format_double(Us)
            << '\n';
    }
}

json envelope_sidecar_json(const DesignEnvelope& env) {
    json gaps = json::array();
    for (const Gap& gap : env.contact.gaps)
        gaps.push_back(json{{"lo", gap.lo}, {"hi", gap.hi}, {"target_x", gap.target_x}});
    return json{{"T", env.horizon},
                {"J", {env.J.lo, env.J.hi}},
                {"x_check", env.x_check},
                {"y_check", env.y_check},
                {"gaps", gaps}};
}

void write_inflow_csv(std::ostream& out, const InflowEnvelope& env) {
    out << "tau,q_flat,q_sharp,Q_flat\n";
    const Grid& g = env.q_flat.grid;
    for (int i = 0; i < g.n; ++i)
        out << format_double(g.node(i + 1)) << ',' << format_double(env.q_flat.values[i])
            << ',' << format_double(env.q_sharp.values[i]) << ','
            << format_double(env.Q_flat.node_values[i + 1]) << '\n';
}

json traffic_feasibility_json(const RoadLengthBound& bound, double L) {
    json j{{"L_max", std::isfinite(bound.L_max) ? json(bound.L_max) : json("inf")},
           {"ratio", bound.ratio},
           {"jump_infeasible", bound.jump_infeasible},
           {"worst_pair", {bound.t_i, bound.t_j}}};
    if (L > 0.0) j["feasible_at_L"] = L <= bound.L_max;
    return j;
}

json events_json(const std::vector<TrafficEvent>& events) {
    json arr = json::array();
    for (const TrafficEvent& e : events)
        arr.push_back(json{{"tau", e.tau}, {"jump", e.jump}});
    return arr;
}

void write_svg_plot(std::ostream& out, const std::vector<PlotSeries>& series,
                    const std::string& title) {
    const int W = 860, H = 480, ML = 60, MR = 20, MT = 40, MB = 40;
    double xlo = kInf, xhi = -kInf, ylo = kInf, yhi = -kInf;
    for (const PlotSeries& s : series) {
        for (double v : *s.x) { xlo = std::min(xlo, v); xhi = std::max(xhi, v); }
        for (double v : *s.y) { ylo = std::min(ylo, v); yhi = std::max(yhi, v); }
    }
    if (!(xhi > xlo)) { xlo -= 0.5; xhi += 0.5; }
    if (!(yhi > ylo)) { ylo -= 0.5; yhi += 0.5; }
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad; yhi += pad;
    auto px = [&](double x) { return ML + (x - xlo) / (xhi - xlo) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - ylo) / (yhi - ylo) * (H - MT - MB); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n"
        << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
        << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML
        << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xlo + k * (xhi - xlo) / 4;
        const double yv = ylo + k * (yhi - ylo) / 4;
        out << "<text x=\"" << px(xv) << "\" y=\"" << H - MB + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << std::setprecision(4) << xv << "</text>\n"
            << "<text x=\"" << ML - 6 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << std::setprecision(4) << yv << "</text>\n";
    }
    int ci = 0;
    for (const PlotSeries& s : series) {
        const char* color = colors[ci % 5];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x->size(); ++i)
            out << px((*s.x)[i]) << ',' << py((*s.y)[i]) << ' ';
        out << "\"/>\n"
            << "<text x=\"" << W - MR - 8 << "\" y=\"" << MT + 16 * (ci + 1)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << color << "\">" << s.label << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open \"" + path + "\"");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) fail("cannot write \"" + path + "\"");
    out << content;
}

}  // namespace invdes::io

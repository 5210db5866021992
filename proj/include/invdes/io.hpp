#ifndef INVDES_IO_HPP
#define INVDES_IO_HPP

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "invdes/design.hpp"
#include "invdes/traffic.hpp"

namespace invdes::io {

using json = nlohmann::json;

/// Profile CSV: header "x,value", one row per cell with its right endpoint
/// and value. The grid is inferred and must be uniform within 1e-9
/// relative spacing (std::invalid_argument otherwise).
SampledProfile read_profile_csv(std::istream& in);
SampledProfile read_profile_csv_file(const std::string& path);
void write_profile_csv(std::ostream& out, const SampledProfile& u);
void write_profile_csv_file(const std::string& path, const SampledProfile& u);

/// Flux specification:
///   {"kind":"burgers"}
///   {"kind":"table","samples":[[u,f],...]}
///   {"kind":"traffic","speed":{...},"rho_bar":r}
/// where speed is {"kind":"greenshields","v_max":v,"R":R} or
/// {"kind":"table","samples":[[rho,v],...]}.
FluxModel make_flux(const json& spec);
TrafficFlux make_traffic_flux(const json& spec);
SpeedLaw make_speed_law(const json& spec, double rho_bar);

json oleinik_verdict_json(const OleinikVerdict& v);
json membership_verdict_json(const MembershipVerdict& v);

/// Envelope CSV columns x,u_flat,u_sharp,U_flat,U_sharp (rows at cell right
/// endpoints) and the JSON sidecar {T, J, x_check, gaps:[...]}.
void write_envelope_csv(std::ostream& out, const DesignEnvelope& env);
json envelope_sidecar_json(const DesignEnvelope& env);

/// Traffic envelope CSV columns tau,q_flat,q_sharp,Q_flat.
void write_inflow_csv(std::ostream& out, const InflowEnvelope& env);
json traffic_feasibility_json(const RoadLengthBound& bound, double L);
json events_json(const std::vector<TrafficEvent>& events);

/// Minimal self-contained SVG line plot of named series sharing abscissae.
struct PlotSeries {
    std::string label;
    const std::vector<double>* x = nullptr;
    const std::vector<double>* y = nullptr;
};
void write_svg_plot(std::ostream& out, const std::vector<PlotSeries>& series,
                    const std::string& title);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace invdes::io

#endif  // INVDES_IO_HPP

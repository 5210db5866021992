#include "invdes/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "invdes/detail/hermite.hpp"

namespace invdes {

namespace {

double flow(const SpeedLaw& law, double rho) { return rho * law.v(rho); }
double flow_slope(const SpeedLaw& law, double rho) {
    return law.v(rho) + rho * law.dv(rho);
}
double flow_curvature(const SpeedLaw& law, double rho) {
    return 2.0 * law.dv(rho) + rho * law.ddv(rho);
}

}  // namespace

SpeedLaw greenshields_law(double v_max, double R, double rho_bar) {
    if (!(v_max > 0.0) || !(R > 0.0))
        throw std::invalid_argument("speed law needs positive v_max and R");
    SpeedLaw law;
    law.v = [v_max, R](double rho) { return v_max * (1.0 - rho / R); };
    law.dv = [v_max, R](double) { return -v_max / R; };
    law.ddv = [](double) { return 0.0; };
    law.R = R;
    law.rho_bar = rho_bar;
    law.name = "greenshields";
    return law;
}

SpeedLaw speed_law_from_table(
    const std::vector<std::pair<double, double>>& samples, double rho_bar) {
    if (samples.size() < 4)
        throw std::invalid_argument("speed table needs at least 4 samples");
    std::vector<double> rho(samples.size()), v(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        rho[i] = samples[i].first;
        v[i] = samples[i].second;
    }
    auto interp = std::make_shared<detail::CubicHermite>(
        rho, v, detail::fritsch_carlson_slopes(rho, v));
    const double h = (rho.back() - rho.front()) / (100.0 * samples.size());
    SpeedLaw law;
    law.v = [interp](double r) { return interp->eval(r); };
    law.dv = [interp](double r) { return interp->deriv(r); };
    law.ddv = [interp, h](double r) {
        return (interp->deriv(r + h) - interp->deriv(r - h)) / (2.0 * h);
    };
    law.R = rho.back();
    law.rho_bar = rho_bar;
    law.name = "table";
    return law;
}

TrafficFlux flux_from_speed(const SpeedLaw& law) {
    const double R = law.R;
    if (!(law.rho_bar > 0.0) || law.rho_bar >= R)
        throw std::invalid_argument("working cap must lie in (0, R)");
    if (std::abs(law.v(R)) > 1e-7 * std::max(1.0, law.v(0.0)))
        throw std::invalid_argument("speed law must vanish at the jam density");
    // Strict concavity of rho*v on a sample grid; this is what makes the
    // flow-density map invertible with a convex inverse.
    const int m = 256;
    for (int i = 0; i <= m; ++i) {
        const double rho = R * i / m;
        if (!(flow_curvature(law, rho) < 0.0))
            throw std::invalid_argument("rho*v(rho) is not strictly concave");
    }

    // Density of maximal flow: the root of the decreasing flow slope.
    double rho_hat = R;
    if (flow_slope(law, R) < 0.0) {
        double lo = 0.0, hi = R;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * R; ++it) {
            const double mid = 0.5 * (lo + hi);
            (flow_slope(law, mid) > 0.0 ? lo : hi) = mid;
        }
        rho_hat = 0.5 * (lo + hi);
    }
    if (!(law.rho_bar < rho_hat))
        throw std::invalid_argument(
            "working cap reaches the congested branch; the flux derivative blows up");

    // Exact forward tabulation: q_i = rho_i v(rho_i) strictly increases on
    // [0, rho_bar], and all derivatives are closed-form in rho.
    const int M = 2048;
    std::vector<double> q(M + 1), rho(M + 1), fp(M + 1), fpp(M + 1), finv(M + 1);
    for (int i = 0; i <= M; ++i) {
        rho[i] = law.rho_bar * i / M;
        q[i] = flow(law, rho[i]);
        const double qp = flow_slope(law, rho[i]);
        fp[i] = 1.0 / qp;
        fpp[i] = -flow_curvature(law, rho[i]) / (qp * qp * qp);
        finv[i] = 1.0 / fpp[i];
    }

    auto f_tab = std::make_shared<detail::CubicHermite>(q, rho, fp);
    auto fp_tab = std::make_shared<detail::CubicHermite>(q, fp, fpp);
    auto inv_tab = std::make_shared<detail::CubicHermite>(fp, q, finv);

    TrafficFlux out{
        FluxModel("traffic",
                  [f_tab](double x) { return f_tab->eval(x); },
                  [fp_tab](double x) { return fp_tab->eval(x); },
                  [inv_tab](double y) { return inv_tab->eval(y); },
                  Interval{0.0, q.back()}, Interval{fp.front(), fp.back()}),
        q.back(), law.rho_bar, rho_hat};
    validate_flux(out.flux);
    return out;
}

OutflowRecord make_outflow_record(SampledProfile q_out, const TrafficFlux& f) {
    const Interval r = q_out.value_range();
    const double tol = 1e-9 * std::max(1.0, f.q_bar);
    if (r.lo < -tol || r.hi > f.q_bar + tol)
        throw ConstraintInfeasibleError("outflow leaves [0, q_bar]");
    q_out.range_hint = Interval{0.0, f.q_bar};
    return {std::move(q_out), f.q_bar};
}

RoadLengthBound max_road_length(const OutflowRecord& rec, const TrafficFlux& f) {
    const SampledProfile& q = rec.q_out;
    const Grid& g = q.grid;
    RoadLengthBound out;

    // Largest difference quotient of t -> f'(q_out(t)); as in the space
    // problem the maximum over all pairs is attained on adjacent cells.
    std::vector<double> inc(g.n, 0.0);
    double prev = f.flux.deriv(q.values[0]);
    double worst = -kInf;
    int at = 1;
    for (int i = 1; i < g.n; ++i) {
        const double cur = f.flux.deriv(q.values[i]);
        inc[i] = cur - prev;
        if (inc[i] / g.dx > worst) {
            worst = inc[i] / g.dx;
            at = i;
        }
        prev = cur;
    }
    out.ratio = worst;
    out.t_i = g.node(at);
    out.t_j = g.node(at + 1);

    // A genuine up-jump concentrates an O(1) increment in one node; compare
    // against the neighbouring increments to tell it from a steep ramp.
    const double scale = f.flux.slope_domain().width() + 1e-12;
    for (int i = 1; i < g.n; ++i) {
        if (inc[i] <= 1e-9 * scale) continue;
        double neighbour = 0.0;
        if (i >= 2) neighbour = std::max(neighbour, std::abs(inc[i - 1]));
        if (i + 1 < g.n) neighbour = std::max(neighbour, std::abs(inc[i + 1]));
        if (inc[i] > std::max(10.0 * neighbour, 1e-6 * scale)) {
            out.jump_infeasible = true;
            out.t_i = g.node(i);
            out.t_j = g.node(i + 1);
            break;
        }
    }

    if (out.jump_infeasible) out.L_max = 0.0;
    else out.L_max = (out.ratio > 0.0) ? 1.0 / out.ratio : kInf;
    return out;
}

Interval upstream_window(const OutflowRecord& rec, double L,
                         const TrafficFlux& f) {
    if (!(L >= 0.0)) throw std::invalid_argument("road length must be nonnegative");
    const RoadLengthBound bound = max_road_length(rec, f);
    if (L > bound.L_max)
        throw NotReachableError(bound.t_i, bound.t_j, bound.ratio,
                                bound.L_max > 0.0 ? 1.0 / bound.L_max : 0.0);
    const Grid& g = rec.q_out.grid;
    const double fp_first = f.flux.deriv(rec.q_out.values.front());
    const double fp_last = f.flux.deriv(rec.q_out.values.back());
    return {g.x0 - L * fp_first, g.right() - L * fp_last};
}

InflowEnvelope inflow_envelope(const OutflowRecord& rec, double L,
                               const TrafficFlux& f) {
    InflowEnvelope env;
    env.window = upstream_window(rec, L, f);  // throws when L > L_max
    env.L = L;
    env.q_bar = rec.q_bar;

    // Time plays the role of space and the road length the role of the
    // horizon; everything else is the generic localized design machinery.
    const LocalizedTarget target{rec.q_out, Interval{0.0, rec.q_bar}, L};
    env.design = restricted_design(target, f.flux);
    env.q_flat = env.design.envelope.u_flat;
    env.q_sharp = env.design.envelope.u_sharp;
    env.Q_flat = env.design.envelope.U_flat;
    env.kinks = detect_events(env, default_kink_threshold(env));
    return env;
}

InflowVerdict admissible_inflow(const SampledProfile& q_in,
                                const InflowEnvelope& env) {
    const Grid& g = env.q_flat.grid;
    const SampledProfile q = resample(q_in, g);

    InflowVerdict verdict;
    const double vtol = 1e-9 * std::max(1.0, env.q_bar);
    for (int i = 0; i < g.n; ++i) {
        if (q.values[i] < -vtol || q.values[i] > env.q_bar + vtol) {
            verdict.admissible = false;
            verdict.witness = g.node(i + 1);
            verdict.excess = std::max(-q.values[i], q.values[i] - env.q_bar);
            return verdict;
        }
    }

    // Running integrals from tau_1 of the candidate and of both envelopes.
    double p = 0.0, lo = 0.0, hi = 0.0;
    const double tol = g.dx * std::max(env.q_bar, 1e-12);
    for (int i = 0; i < g.n; ++i) {
        p += q.values[i] * g.dx;
        lo += env.q_flat.values[i] * g.dx;
        hi += env.q_sharp.values[i] * g.dx;
        if (p < lo - tol || p > hi + tol) {
            verdict.admissible = false;
            verdict.witness = g.node(i + 1);
            verdict.excess = std::max(lo - p, p - hi);
            return verdict;
        }
    }
    return verdict;
}

double default_kink_threshold(const InflowEnvelope& env) {
    const double width = std::max(env.window.width(), env.q_flat.grid.dx);
    return 10.0 * env.q_bar / width;
}

std::vector<TrafficEvent> detect_events(const InflowEnvelope& env,
                                        double kink_threshold) {
    std::vector<TrafficEvent> events;
    const Grid& g = env.q_flat.grid;
    const auto& v = env.q_flat.values;

    // Jumps of q_flat: runs of above-threshold increments merge into one
    // event at the largest increment.
    int run_start = -1;
    double run_sum = 0.0, run_best = 0.0;
    int run_best_at = -1;
    auto flush = [&]() {
        if (run_start < 0) return;
        events.push_back({g.node(run_best_at), run_sum});
        run_start = -1;
        run_sum = run_best = 0.0;
        run_best_at = -1;
    };
    for (int i = 1; i < g.n; ++i) {
        const double d = v[i] - v[i - 1];
        if (std::abs(d) > kink_threshold) {
            if (run_start < 0) run_start = i;
            run_sum += d;
            if (std::abs(d) > run_best) {
                run_best = std::abs(d);
                run_best_at = i;
            }
        } else {
            flush();
        }
    }
    flush();

    // Cone meeting points of the sharp reconstruction inside each gap: the
    // latest instant a blocked flow can have resumed.
    const DesignEnvelope& de = env.design.envelope;
    const double J_hi = env.q_bar, J_lo = 0.0;
    for (const Gap& gap : de.contact.gaps) {
        if (!(J_hi > J_lo)) break;
        const double A = de.U_flat.at(gap.lo);
        const double B = de.U_flat.at(gap.hi);
        const double kink = (B - A + J_hi * gap.lo - J_lo * gap.hi) / (J_hi - J_lo);
        const bool duplicate =
            std::any_of(events.begin(), events.end(), [&](const TrafficEvent& e) {
                return std::abs(e.tau - kink) <= 2.0 * g.dx;
            });
        if (!duplicate) events.push_back({kink, J_hi - J_lo});
    }
    std::sort(events.begin(), events.end(),
              [](const TrafficEvent& a, const TrafficEvent& b) { return a.tau < b.tau; });
    return events;
}

}  // namespace invdes

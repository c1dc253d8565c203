#include "smwss/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "smwss/errors.hpp"
#include "smwss/numerics.hpp"

namespace smwss {

TotalPotential build_potential(const ModelSpec& spec) {
    TotalPotential tp;
    tp.U = spec.U;
    tp.include_gravity = spec.include_gravity;
    tp.include_lattice = spec.include_lattice;
    tp.units = spec.units;
    switch (spec.variant) {
    case SurfaceVariant::none:
        tp.surface = SurfacePotential::none();
        break;
    case SurfaceVariant::perfect:
        tp.surface = SurfacePotential::perfect();
        break;
    case SurfaceVariant::lj_cp: {
        if (!spec.cp_table) throw InputError("lj+cp surface needs a CP table");
        const double c3 = spec.C3 > 0 ? spec.C3 : extract_C3(*spec.cp_table).c3;
        const auto lj = LennardJonesParams::from_z0_c3(spec.z0, c3, spec.repulsive_exponent);
        auto cp = std::make_shared<const CPInterpolant>(spec.cp_table);
        double zm = spec.z_m ? *spec.z_m : find_matching_distance(lj, *cp);
        zm *= spec.z_m_scale;
        tp.surface = SurfacePotential::lj_cp(lj, std::move(cp), zm);
        break;
    }
    }
    return tp;
}

Solution solve_model(const ModelSpec& spec) {
    const auto tp = build_potential(spec);
    auto mesh = std::make_shared<const Mesh>(build_mesh(tp, spec.z_max, spec.mesh));
    Solution s;
    s.potential = tp;
    s.mesh = std::move(mesh);
    s.spectrum = solve(s.potential, s.mesh, spec.solve);
    classify(s.spectrum, s.potential, spec.classify);
    return s;
}

Solution solve_model(const ModelSpec& spec, std::shared_ptr<const Mesh> mesh) {
    if (!mesh) throw InputError("solve_model: missing mesh");
    Solution s;
    s.potential = build_potential(spec);
    s.mesh = std::move(mesh);
    s.spectrum = solve(s.potential, s.mesh, spec.solve);
    classify(s.spectrum, s.potential, spec.classify);
    return s;
}

// ---- Raman ------------------------------------------------------------------------

std::complex<double> raman_amplitude(const EigenState& a, const EigenState& b, const Mesh& mesh, double k_eff,
                                     const LatticeUnits& units) {
    if (a.psi.size() != mesh.size() || b.psi.size() != mesh.size())
        throw InputError("raman_amplitude: states are not on this mesh");
    const double k = k_eff * units.length_unit;
    const auto w = mesh.weights();
    CompensatedSum re, im;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double p = w[i] * a.psi[i] * b.psi[i];
        if (p == 0) continue;
        re += p * std::cos(k * mesh.z[i]);
        im += p * std::sin(k * mesh.z[i]);
    }
    return {re.value(), im.value()};
}

namespace {

std::vector<SpectrumLine> pair_lines(const SpectrumResult& r, const RamanConfig& cfg, const LatticeUnits& units,
                                     bool apply_floor) {
    std::vector<const EigenState*> states;
    for (const auto* s : r.reported())
        if (cfg.include_bound || s->label != StateLabel::surface_bound) states.push_back(s);
    const double hz_per_er = units.recoil_frequency();
    std::vector<SpectrumLine> out;
    for (const auto* a : states)
        for (const auto* b : states) {
            const double p = std::norm(raman_amplitude(*a, *b, *r.mesh, cfg.k_eff, units));
            if (apply_floor && p < cfg.floor) continue;
            out.push_back({a->index, b->index, (a->energy - b->energy) * hz_per_er, std::min(p, 1.0)});
        }
    return out;
}

} // namespace

std::vector<SpectrumLine> stick_spectrum(const SpectrumResult& r, const RamanConfig& cfg, const LatticeUnits& units) {
    if (!(cfg.k_eff > 0)) throw DomainError("stick_spectrum: k_eff must be positive");
    return pair_lines(r, cfg, units, true);
}

std::vector<SpectrumLine> probability_map(const SpectrumResult& r, const RamanConfig& cfg, const LatticeUnits& units) {
    RamanConfig all = cfg;
    all.include_bound = true;
    return pair_lines(r, all, units, false);
}

// ---- tracking ---------------------------------------------------------------------

namespace {

double interp(const Mesh& m, const std::vector<double>& psi, double z) {
    const auto it = std::upper_bound(m.z.begin(), m.z.end(), z);
    if (it == m.z.begin() || it == m.z.end()) return 0.0;
    const std::size_t i = static_cast<std::size_t>(it - m.z.begin());
    const double t = (z - m.z[i - 1]) / (m.z[i] - m.z[i - 1]);
    return (1 - t) * psi[i - 1] + t * psi[i];
}

} // namespace

double state_overlap(const EigenState& a, const Mesh& ma, const EigenState& b, const Mesh& mb, double z_from,
                     double step) {
    const double hi = std::min(ma.z_max, mb.z_max);
    const double lo = std::max({z_from, ma.z_min, mb.z_min});
    if (!(hi > lo)) return 0.0;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    const double h = (hi - lo) / static_cast<double>(n);
    CompensatedSum s;
    for (std::size_t i = 0; i <= n; ++i) {
        const double z = lo + h * static_cast<double>(i);
        const double wgt = (i == 0 || i == n) ? 0.5 * h : h;
        s += wgt * interp(ma, a.psi, z) * interp(mb, b.psi, z);
    }
    return std::abs(s.value());
}

std::vector<int> match_states(const std::vector<const EigenState*>& prev, const Mesh& mprev,
                              const std::vector<const EigenState*>& next, const Mesh& mnext,
                              std::vector<double>* overlaps) {
    struct Cand {
        double o;
        std::size_t i, j;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < prev.size(); ++i)
        for (std::size_t j = 0; j < next.size(); ++j)
            cands.push_back({state_overlap(*prev[i], mprev, *next[j], mnext), i, j});
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.o != b.o) return a.o > b.o;
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    std::vector<int> out(prev.size(), -1);
    std::vector<char> used(next.size(), 0);
    if (overlaps) overlaps->assign(prev.size(), 0.0);
    for (const auto& c : cands) {
        if (out[c.i] >= 0 || used[c.j] || c.o <= 0) continue;
        out[c.i] = static_cast<int>(c.j);
        used[c.j] = 1;
        if (overlaps) (*overlaps)[c.i] = c.o;
    }
    return out;
}

std::vector<double> ScanResult::curve(int track) const {
    std::vector<double> e(points.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto rep = points[p].solution->spectrum.reported();
        for (std::size_t k = 0; k < rep.size(); ++k)
            if (points[p].track[k] == track) e[p] = rep[k]->energy;
    }
    return e;
}

int ScanResult::track_count() const {
    int n = 0;
    for (const auto& p : points)
        for (int t : p.track) n = std::max(n, t + 1);
    return n;
}

namespace {

void assign_tracks(ScanResult& scan) {
    int next_id = 0;
    for (std::size_t p = 0; p < scan.points.size(); ++p) {
        auto& pt = scan.points[p];
        const auto rep = pt.solution->spectrum.reported();
        pt.track.assign(rep.size(), -1);
        pt.overlap.assign(rep.size(), 1.0);
        if (p > 0) {
            const auto& prev = scan.points[p - 1];
            const auto prep = prev.solution->spectrum.reported();
            std::vector<double> ov;
            const auto match = match_states(prep, *prev.solution->mesh, rep, *pt.solution->mesh, &ov);
            for (std::size_t i = 0; i < match.size(); ++i) {
                if (match[i] < 0) continue;
                pt.track[match[i]] = prev.track[i];
                pt.overlap[match[i]] = ov[i];
                if (ov[i] < 0.5) pt.tracking_warning = true;
            }
        }
        for (auto& t : pt.track)
            if (t < 0) t = next_id++;
        for (int t : pt.track) next_id = std::max(next_id, t + 1);
    }
}

} // namespace

std::vector<Crossing> find_crossings(const ScanResult& scan, double threshold) {
    std::vector<Crossing> out;
    const int ntrack = scan.track_count();
    std::vector<std::vector<double>> curves(ntrack);
    for (int t = 0; t < ntrack; ++t) curves[t] = scan.curve(t);
    // pairs that are energy neighbours at some point
    std::set<std::pair<int, int>> pairs;
    for (std::size_t p = 0; p < scan.points.size(); ++p) {
        std::vector<std::pair<double, int>> lev;
        for (int t = 0; t < ntrack; ++t)
            if (!std::isnan(curves[t][p])) lev.push_back({curves[t][p], t});
        std::sort(lev.begin(), lev.end());
        for (std::size_t k = 0; k + 1 < lev.size(); ++k)
            pairs.insert({std::min(lev[k].second, lev[k + 1].second), std::max(lev[k].second, lev[k + 1].second)});
    }
    for (const auto& [a, b] : pairs) {
        const auto& ca = curves[a];
        const auto& cb = curves[b];
        const std::size_t n = scan.points.size();
        std::vector<double> gap(n, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t p = 0; p < n; ++p)
            if (!std::isnan(ca[p]) && !std::isnan(cb[p])) gap[p] = std::abs(ca[p] - cb[p]);
        for (std::size_t p = 0; p < n; ++p) {
            if (std::isnan(gap[p]) || gap[p] >= threshold) continue;
            const bool left = p == 0 || std::isnan(gap[p - 1]) || gap[p - 1] > gap[p];
            const bool right = p + 1 == n || std::isnan(gap[p + 1]) || gap[p + 1] > gap[p];
            // endpoints only count when the neighbour on the inside is larger
            const bool interior_neighbour = (p > 0 && !std::isnan(gap[p - 1])) || (p + 1 < n && !std::isnan(gap[p + 1]));
            if (left && right && interior_neighbour) out.push_back({a, b, scan.points[p].parameter, gap[p]});
        }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) {
        return x.parameter != y.parameter ? x.parameter < y.parameter
                                          : (x.track_a != y.track_a ? x.track_a < y.track_a : x.track_b < y.track_b);
    });
    return out;
}

void annotate_crossings(ScanResult& scan, double factor) {
    for (auto& p : scan.points) p.near_crossing.assign(p.track.size(), 0);
    const int ntrack = scan.track_count();
    for (int t = 0; t < ntrack; ++t) {
        std::vector<std::pair<std::size_t, std::size_t>> at;  // (point, reported slot)
        std::vector<double> sens;
        for (std::size_t p = 0; p < scan.points.size(); ++p) {
            const auto rep = scan.points[p].solution->spectrum.reported();
            for (std::size_t k = 0; k < rep.size(); ++k)
                if (scan.points[p].track[k] == t) {
                    at.push_back({p, k});
                    sens.push_back(std::abs(rep[k]->z0_sensitivity));
                }
        }
        if (at.empty()) continue;
        auto sorted = sens;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        const double median = sorted[sorted.size() / 2];
        for (std::size_t j = 0; j < at.size(); ++j)
            if (sens[j] > factor * median) scan.points[at[j].first].near_crossing[at[j].second] = 1;
    }
    for (const auto& c : scan.crossings)
        for (auto& p : scan.points) {
            if (p.parameter != c.parameter) continue;
            for (std::size_t k = 0; k < p.track.size(); ++k)
                if (p.track[k] == c.track_a || p.track[k] == c.track_b) p.near_crossing[k] = 1;
        }
}

ScanResult scan_z0(const ModelSpec& base, const std::vector<double>& z0_values, int threads) {
    if (z0_values.empty()) throw DomainError("scan_z0: no z0 values");
    for (std::size_t i = 1; i < z0_values.size(); ++i)
        if (!(z0_values[i] > z0_values[i - 1])) throw DomainError("scan_z0: z0 values must increase");
    if (base.variant != SurfaceVariant::lj_cp) throw DomainError("scan_z0: needs the lj+cp surface");
    ModelSpec fixed = base;
    if (!(fixed.C3 > 0)) fixed.C3 = extract_C3(*base.cp_table).c3;
    ScanResult scan;
    scan.parameter_name = "z0_m";
    scan.points.resize(z0_values.size());
    parallel_for(z0_values.size(), threads, [&](std::size_t i) {
        ModelSpec s = fixed;
        s.z0 = z0_values[i];
        s.z_m.reset();
        scan.points[i].parameter = z0_values[i];
        scan.points[i].solution = std::make_shared<const Solution>(solve_model(s));
    });
    assign_tracks(scan);
    scan.crossings = find_crossings(scan);
    annotate_crossings(scan);
    return scan;
}

std::vector<std::pair<int, int>> default_transitions(int n_lo, int n_hi, std::vector<int> spacings) {
    std::vector<std::pair<int, int>> out;
    for (int n = n_lo; n <= n_hi; ++n)
        for (int d : spacings) out.push_back({n, n + d});
    return out;
}

C3ScanResult scan_c3(const ModelSpec& base, const std::vector<double>& factors, bool rescale_D,
                     const std::vector<std::pair<int, int>>& transitions, int threads) {
    if (base.variant != SurfaceVariant::lj_cp) throw DomainError("scan_c3: needs the lj+cp surface");
    if (factors.empty()) throw DomainError("scan_c3: no factors");
    for (double f : factors)
        if (!(f > 0)) throw DomainError("scan_c3: factors must be positive");
    const auto unit = std::find_if(factors.begin(), factors.end(), [](double f) { return std::abs(f - 1) < 1e-12; });
    if (unit == factors.end()) throw DomainError("scan_c3: factor 1 must be part of the scan");
    const std::size_t ref = static_cast<std::size_t>(unit - factors.begin());

    const double c3 = base.C3 > 0 ? base.C3 : extract_C3(*base.cp_table).c3;
    ModelSpec unscaled = base;
    unscaled.C3 = c3;
    const TotalPotential tp0 = build_potential(unscaled);
    const double z_m0 = tp0.surface.z_m();

    const auto ref_mesh = std::make_shared<const Mesh>(build_mesh(tp0, base.z_max, base.mesh));

    C3ScanResult out;
    out.factors = factors;
    out.rescale_D = rescale_D;
    out.scan.parameter_name = "c3_factor";
    out.scan.points.resize(factors.size());
    parallel_for(factors.size(), threads, [&](std::size_t i) {
        const double f = factors[i];
        ModelSpec s = unscaled;
        s.cp_table = std::make_shared<const PotentialTable>(base.cp_table->scaled(f));
        if (rescale_D) {
            s.C3 = f * c3;
            s.z_m.reset();
        } else {
            // LJ keeps its unscaled tail; the branches meet at the baseline z_m
            s.C3 = c3;
            s.z_m = z_m0;
        }
        out.scan.points[i].parameter = f;
        out.scan.points[i].solution = std::make_shared<const Solution>(solve_model(s, ref_mesh));
    });

    // Identify every point's states with the reference labels by overlap.
    const auto& refpt = out.scan.points[ref];
    const auto refrep = refpt.solution->spectrum.reported();
    std::vector<std::vector<int>> to_ref(factors.size());
    for (std::size_t p = 0; p < factors.size(); ++p) {
        auto& pt = out.scan.points[p];
        const auto rep = pt.solution->spectrum.reported();
        std::vector<double> ov;
        const auto match = match_states(refrep, *refpt.solution->mesh, rep, *pt.solution->mesh, &ov);
        pt.track.assign(rep.size(), -1);
        pt.overlap.assign(rep.size(), 0.0);
        for (std::size_t i = 0; i < match.size(); ++i) {
            if (match[i] < 0) continue;
            pt.track[match[i]] = refrep[i]->index;
            pt.overlap[match[i]] = ov[i];
            if (ov[i] < 0.5) pt.tracking_warning = true;
        }
    }
    out.scan.crossings = find_crossings(out.scan);

    const double hz = base.units.recoil_frequency();
    for (const auto& [n, m] : transitions) {
        TransitionDelta td;
        td.n = n;
        td.m = m;
        for (std::size_t p = 0; p < factors.size(); ++p) {
            const auto rep = out.scan.points[p].solution->spectrum.reported();
            const auto& tr = out.scan.points[p].track;
            double en = std::numeric_limits<double>::quiet_NaN(), em = en;
            for (std::size_t k = 0; k < rep.size(); ++k) {
                if (tr[k] == n) en = rep[k]->energy;
                if (tr[k] == m) em = rep[k]->energy;
            }
            if (std::isnan(en) || std::isnan(em))
                throw ExtractionError("scan_c3: transition " + std::to_string(n) + "->" + std::to_string(m) +
                                      " not resolved at every factor");
            td.nu_hz.push_back((en - em) * hz);
        }
        for (double v : td.nu_hz) td.delta_hz.push_back(v - td.nu_hz[ref]);
        out.transitions.push_back(std::move(td));
    }
    return out;
}

std::vector<C3Uncertainty> infer_c3_uncertainty(const C3ScanResult& scan, double freq_uncertainty_hz) {
    if (!(freq_uncertainty_hz > 0)) throw DomainError("infer_c3_uncertainty: uncertainty must be positive");
    const auto& f = scan.factors;
    std::size_t lo = f.size(), hi = f.size();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < 1 - 1e-12 && (lo == f.size() || f[i] > f[lo])) lo = i;
        if (f[i] > 1 + 1e-12 && (hi == f.size() || f[i] < f[hi])) hi = i;
    }
    if (lo == f.size() || hi == f.size())
        throw DomainError("infer_c3_uncertainty: scan must bracket factor 1");
    std::vector<C3Uncertainty> out;
    for (const auto& t : scan.transitions) {
        C3Uncertainty u;
        u.n = t.n;
        u.m = t.m;
        u.sensitivity_hz = (t.nu_hz[hi] - t.nu_hz[lo]) / (std::log(f[hi]) - std::log(f[lo]));
        u.relative = u.sensitivity_hz == 0 ? std::numeric_limits<double>::infinity()
                                           : freq_uncertainty_hz / std::abs(u.sensitivity_hz);
        out.push_back(u);
    }
    return out;
}

} // namespace smwss

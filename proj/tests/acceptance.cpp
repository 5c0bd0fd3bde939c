// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance                      run every criterion
//   acceptance --criterion ID       run one; exit 0 on PASS
//   acceptance --criterion ID --expect-fail
//                                   exit 0 while the criterion still fails (documented deviation)
//   acceptance --list               print the criterion ids

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "recoil/recoil.hpp"
#include "recoil_cli/parallel.hpp"

using namespace recoil;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;    ///< measured values, printed either way
    std::vector<std::string> why;  ///< failed requirements

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            why.push_back(what);
        }
    }
};

struct Criterion {
    std::string_view id;
    std::function<void(Verdict&)> check;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Emitter emitter(double w0, double d = 0.01, Eigen::Vector3cd g = Eigen::Vector3cd(0, 0, 1)) {
    Emitter e;
    e.omega0 = w0;
    e.d = d;
    e.gamma_vec = g;
    return e;
}

const PlasmaParams reference{0.4, 0.015};

std::vector<double> exact_fx(const std::vector<Emitter>& es, const std::vector<PlasmaParams>& ps) {
    return cli::parallel_map<double>(es.size(), [&](std::size_t i) { return resonant_force(es[i], ps[i]).F_tilde_x; });
}

void f0_conversion(Verdict& v) {
    const double a = force_normalization(7900.0, 100.0);
    const double b = force_normalization(1.0, 1.0);
    v.require(rel(a, 0.047) < 0.02, "7900 D at 100 nm gives " + std::to_string(a) + " pN");
    v.require(rel(b, 0.075) < 0.02, "1 D at 1 nm gives " + std::to_string(b) + " pN");
    v.detail << "F0 = " << a << " pN (7900 D, 100 nm), " << b << " pN (1 D, 1 nm)";
}

void characteristic(Verdict& v) {
    const BandEdges b = characteristic_frequencies(reference);
    const double wc = reference.omega_c;
    const double mid = std::sqrt(0.5 + 0.25 * wc * wc);
    v.require(std::abs(b.omega_spp - 1.0 / std::sqrt(2.0)) < 1e-5, "omega_spp off");
    v.require(std::abs(b.omega_plus - (mid + 0.5 * wc)) < 1e-5, "omega_+ off");
    v.require(std::abs(b.omega_minus - (mid - 0.5 * wc)) < 1e-5, "omega_- off");
    v.require(std::abs(b.omega_plus - 0.93485) < 1e-5 && std::abs(b.omega_minus - 0.53485) < 1e-5,
              "band edges differ from 0.53485 / 0.93485");
    v.detail << "omega_spp = " << b.omega_spp << ", omega_- = " << b.omega_minus << ", omega_+ = " << b.omega_plus;
}

void qs_exact(Verdict& v) {
    const std::vector<double> ws{0.6, 0.7, 0.8, 0.9};
    const auto diffs = cli::parallel_map<double>(ws.size(), [&](std::size_t i) {
        const double ex = resonant_force(emitter(ws[i]), reference).F_tilde_x;
        const double qs = quasistatic_force_integral(emitter(ws[i]), reference).F_tilde_x;
        return rel(qs, ex);
    });
    const double worst = *std::max_element(diffs.begin(), diffs.end());
    v.require(worst < 0.05, "largest relative difference " + std::to_string(worst));
    v.detail << "largest relative difference " << worst << " over omega0 = 0.6 .. 0.9";
}

void sign_structure(Verdict& v) {
    std::vector<Emitter> es;
    for (int i = 0; i <= 110; ++i) es.push_back(emitter(0.45 + 0.005 * i));
    const auto f = exact_fx(es, std::vector<PlasmaParams>(es.size(), reference));
    const BandEdges b = characteristic_frequencies(reference);
    int changes = 0;
    double crossing = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        if ((f[i - 1] > 0.0) != (f[i] > 0.0)) {
            ++changes;
            crossing = 0.5 * (es[i - 1].omega0 + es[i].omega0);
        }
    }
    const auto imax = std::max_element(f.begin(), f.end()) - f.begin();
    const auto imin = std::min_element(f.begin(), f.end()) - f.begin();
    const double wmax = es[imax].omega0;
    const double wmin = es[imin].omega0;
    v.require(changes == 1, std::to_string(changes) + " sign changes");
    v.require(crossing > b.omega_minus && crossing < b.omega_plus, "sign change outside the band");
    v.require(f[imax] > 0.0 && std::abs(wmax - b.omega_minus) < 0.03, "positive peak not near omega_-");
    v.require(f[imin] < 0.0 && std::abs(wmin - b.omega_plus) < 0.03, "negative peak not near omega_+");
    v.detail << changes << " sign change(s), near " << crossing << "; peak " << f[imax] << " at " << wmax << ", peak " << f[imin]
             << " at " << wmin;
}

void bias_antisymmetry(Verdict& v) {
    std::vector<Emitter> es;
    std::vector<PlasmaParams> ps;
    for (double w : {0.55, 0.6, 0.7, 0.8, 0.9}) {
        for (double d : {0.01, 0.02}) {
            es.push_back(emitter(w, d));
            ps.push_back(reference);
            es.push_back(emitter(w, d));
            ps.push_back(reference.flipped_bias());
        }
    }
    const auto f = exact_fx(es, ps);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); i += 2) worst = std::max(worst, std::abs(f[i] + f[i + 1]) / std::abs(f[i]));
    v.require(worst < 1e-3, "largest |F(wc) + F(-wc)| / |F| = " + std::to_string(worst));
    v.detail << "largest |F(wc) + F(-wc)| / |F| = " << worst << " over 10 points";
}

void orientation_sign(Verdict& v) {
    const double s = 1.0 / std::sqrt(2.0);
    const std::vector<Eigen::Vector3cd> dipoles{Eigen::Vector3cd(0, 0, 1), Eigen::Vector3cd(1, 0, 0),
                                                Eigen::Vector3cd(s, 0, cplx(0, s))};
    std::vector<Emitter> es;
    for (const auto& g : dipoles) es.push_back(emitter(0.8, 0.01, g));
    const auto f = exact_fx(es, std::vector<PlasmaParams>(es.size(), reference));
    const bool same = (f[0] > 0) == (f[1] > 0) && (f[0] > 0) == (f[2] > 0) && f[0] != 0.0;
    v.require(same, "signs differ");
    v.detail << "F_x at omega0 = 0.8: z " << f[0] << ", x " << f[1] << ", (x + iz)/sqrt2 " << f[2];
}

void vertical_symmetry(Verdict& v) {
    std::vector<double> ws;
    for (int i = 0; i <= 7; ++i) ws.push_back(0.55 + 0.05 * i);
    const auto ratio = cli::parallel_map<double>(ws.size(), [&](std::size_t i) {
        const ForceResult r = resonant_force(emitter(ws[i]), reference);
        return std::abs(r.F_tilde_y) / std::abs(r.F_tilde_x);
    });
    const double worst = *std::max_element(ratio.begin(), ratio.end());
    v.require(worst < 1e-3, "largest |F_y| / |F_x| = " + std::to_string(worst));
    v.detail << "largest |F_y| / |F_x| = " << worst << " over omega0 = 0.55 .. 0.9";
}

void distance_scaling(Verdict& v) {
    const std::vector<double> ds{0.005, 0.01, 0.02};
    std::vector<Emitter> es;
    for (double d : ds) es.push_back(emitter(0.7, d));
    const auto f = exact_fx(es, std::vector<PlasmaParams>(es.size(), reference));
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    const double mean = (f[0] + f[1] + f[2]) / 3.0;
    const double spread = (*hi - *lo) / std::abs(mean);
    v.require(spread < 0.10, "normalized force spread " + std::to_string(spread));
    v.detail << "F_x/F0 at d = 0.005, 0.01, 0.02: " << f[0] << ", " << f[1] << ", " << f[2] << " (spread " << spread
             << ")";
}

void weak_bias_law(Verdict& v) {
    const double wc = 0.01;
    const double w_spp = 1.0 / std::sqrt(2.0);
    double worst = 0.0;
    double worst_at = 0.0;
    for (double f : {0.125, -0.125, 0.25, -0.25, 0.45, -0.45}) {
        const double w = w_spp + f * wc;
        const double closed = weak_bias_force(w, wc);
        const double residue = quasistatic_force_residue(emitter(w), PlasmaParams{wc, 0.0}).F_tilde_x;
        const double r = rel(closed, residue);
        if (r > worst) {
            worst = r;
            worst_at = f;
        }
    }
    const double edge = std::abs(weak_bias_force(w_spp + 0.49999 * wc, wc));
    v.require(worst < 0.02, "closed form and residue differ by more than 2%");
    v.require(edge > 1e3, "no divergence at the band edge");
    v.detail << "largest closed-form vs residue difference " << 100.0 * worst << "% at offset " << worst_at
             << " omega_c; |F| = " << edge << " at 0.49999 omega_c";
}

std::vector<double> bloch(double omega_tilde, const std::vector<double>& times) {
    using state = std::array<double, 3>;
    namespace ode = boost::numeric::odeint;
    const double rabi = 2.0 * omega_tilde;
    auto rhs = [rabi](const state& x, state& dx, double) {
        dx[0] = -0.5 * x[0];
        dx[1] = -0.5 * x[1] + rabi * x[2];
        dx[2] = -(x[2] + 1.0) - rabi * x[1];
    };
    state x{0.0, 0.0, 1.0};
    std::vector<double> rho;
    auto stepper = ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<state>());
    ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), 1e-3,
                         [&](const state& s, double) { rho.push_back(0.5 * (1.0 + s[2])); });
    return rho;
}

void population_dynamics(Verdict& v) {
    std::vector<double> t;
    for (int i = 0; i <= 400; ++i) t.push_back(0.05 * i);
    double worst = 0.0;
    double worst_ss = 0.0;
    for (double w : {0.0, 0.3, 1.0}) {
        const auto ref = bloch(w, t);
        for (std::size_t i = 0; i < t.size(); ++i) worst = std::max(worst, std::abs(population(t[i], PumpConfig{w}) - ref[i]));
        const double ss = 4.0 * w * w / (1.0 + 8.0 * w * w);
        worst_ss = std::max(worst_ss, std::abs(population(50.0, PumpConfig{w}) - ss));
        v.require(std::abs(population(0.0, PumpConfig{w}) - 1.0) < 1e-12, "rho(0) != 1");
    }
    v.require(worst < 1e-6, "largest deviation from the Bloch equations " + std::to_string(worst));
    v.require(worst_ss < 1e-8, "steady state missed by " + std::to_string(worst_ss));
    v.detail << "largest deviation from integrated Bloch equations " << worst << ", steady state " << worst_ss;
}

void free_space(Verdict& v) {
    const double w = 2.0 * pi * 3e14;
    const Eigen::Vector3cd g = Eigen::Vector3cd(0.3, cplx(0, 0.2), 1.0).normalized() * (5.0 * si::debye);
    const double oracle =
        std::pow(w, 3) * g.squaredNorm() / (3.0 * pi * si::epsilon0 * si::hbar * std::pow(si::c, 3));
    const double r = rel(vacuum_decay_rate_si(w, g), oracle);
    v.require(r < 1e-6, "relative error " + std::to_string(r));
    v.detail << "vacuum Green contraction matches Wigner-Weisskopf to " << r;
}

void reflection(Verdict& v) {
    const PlasmaParams unbiased{0.0, 0.015};
    double fres = 0.0;
    for (double w : {0.5, 0.9, 1.5}) {
        const cplx eps = permittivity(w, unbiased).eps_t;
        for (double q : {0.0, 0.3, 0.9, 1.2, 3.0, 30.0}) {
            const cplx kz = vacuum_kz(q);
            cplx k1 = std::sqrt(eps - q * q);
            if (k1.imag() < 0.0) k1 = -k1;
            const cplx rs = (kz - k1) / (kz + k1);
            const cplx rp = (eps * kz - k1) / (eps * kz + k1);
            const Eigen::Matrix2cd r = reflection_matrix(q * std::cos(0.4), q * std::sin(0.4), w, unbiased);
            fres = std::max({fres, std::abs(r(0, 0) - rs), std::abs(r(1, 1) - rp), std::abs(r(0, 1)) + std::abs(r(1, 0))});
        }
    }
    const cplx eps15 = permittivity(1.5, unbiased).eps_t;
    const double es =
        std::abs(reflection_matrix(100.0 * std::cos(0.7), 100.0 * std::sin(0.7), 1.5, unbiased)(1, 1) -
                 (eps15 - 1.0) / (eps15 + 1.0));
    const PlasmaParams lossless{0.4, 0.0};
    double poles = 0.0;
    for (int i = 0; i < 36; ++i) {
        const double th = -pi + 2.0 * pi * (i + 0.5) / 36.0;
        const double wt = omega_theta(th, lossless);
        const auto w = spp_frequency_exact(1e4, th, lossless, wt - 0.05, wt + 0.01);
        poles = std::max(poles, w ? std::abs(*w - wt) : 1.0);
    }
    v.require(fres < 1e-9, "Fresnel mismatch " + std::to_string(fres));
    v.require(es < 1e-4, "electrostatic limit mismatch " + std::to_string(es));
    v.require(poles < 1e-6, "pole mismatch " + std::to_string(poles));
    v.detail << "Fresnel " << fres << ", electrostatic " << es << ", poles vs omega_theta " << poles;
}

void efc_topology(Verdict& v) {
    const auto grid = uniform_theta_grid(361);
    for (double wc : {0.0, 0.01, 0.05}) {
        const EfcTopology t = trace_efc(0.7, PlasmaParams{wc, 0.0}, grid).topology;
        v.require(t == EfcTopology::closed,
                  "omega_c = " + std::to_string(wc) + " gives " + to_string(t) + ", expected closed");
    }
    const EfcTopology strong = trace_efc(0.7, PlasmaParams{0.8, 0.0}, grid).topology;
    v.require(strong == EfcTopology::open_hyperbolic, std::string("omega_c = 0.8 gives ") + to_string(strong));
    const Eigen::Vector3cd z(0, 0, 1);
    const int lobes = count_lobes(farfield_pattern(0.7, z, PlasmaParams{0.8, 0.0}, uniform_theta_grid(721)));
    v.require(lobes == 2, std::to_string(lobes) + " far-field lobes at omega_c = 0.8");
    const FarFieldPattern flat = farfield_pattern(0.7, z, PlasmaParams{0.0, 0.0}, uniform_theta_grid(721));
    const auto [lo, hi] = std::minmax_element(flat.intensity.begin(), flat.intensity.end());
    v.require(*lo > 0.99 * *hi, "unbiased pattern not uniform");
    if (v.pass) v.detail << "closed for omega_c <= 0.05, open at 0.8 with two beams, uniform without bias";
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {"f0-conversion", f0_conversion},
        {"characteristic-frequencies", characteristic},
        {"quasistatic-exact-agreement", qs_exact},
        {"sign-structure", sign_structure},
        {"bias-antisymmetry", bias_antisymmetry},
        {"orientation-sign", orientation_sign},
        {"vertical-dipole-symmetry", vertical_symmetry},
        {"distance-scaling", distance_scaling},
        {"weak-bias-law", weak_bias_law},
        {"population-dynamics", population_dynamics},
        {"free-space-oracle", free_space},
        {"reflection-oracles", reflection},
        {"efc-topology", efc_topology},
    };
    return all;
}

bool evaluate(const Criterion& c) {
    Verdict v;
    try {
        c.check(v);
    } catch (const std::exception& e) {
        v.require(false, std::string("exception: ") + e.what());
    }
    std::string text = v.detail.str();
    for (const auto& w : v.why) text += (text.empty() ? "" : "; ") + w;
    std::printf("%s %.*s: %s\n", v.pass ? "PASS" : "FAIL", static_cast<int>(c.id.size()), c.id.data(), text.c_str());
    std::fflush(stdout);
    return v.pass;
}

}  // namespace

int main(int argc, char** argv) {
    std::string only;
    bool expect_fail = false;
    for (int i = 1; i < argc; ++i) {
        const std::string_view a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            only = argv[++i];
        } else if (a == "--expect-fail") {
            expect_fail = true;
        } else if (a == "--list") {
            for (const auto& c : criteria()) std::printf("%.*s\n", static_cast<int>(c.id.size()), c.id.data());
            return 0;
        } else {
            std::fprintf(stderr, "usage: acceptance [--list] [--criterion ID [--expect-fail]]\n");
            return 2;
        }
    }

    if (!only.empty()) {
        const auto it = std::find_if(criteria().begin(), criteria().end(), [&](const Criterion& c) { return c.id == only; });
        if (it == criteria().end()) {
            std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
            return 2;
        }
        const bool pass = evaluate(*it);
        if (expect_fail) {
            if (pass) std::printf("note: %s now passes; remove it from the known deviations\n", only.c_str());
            return pass ? 1 : 0;
        }
        return pass ? 0 : 1;
    }

    int passed = 0;
    for (const auto& c : criteria()) passed += evaluate(c) ? 1 : 0;
    std::printf("%d of %zu criteria passed\n", passed, criteria().size());
    return passed == static_cast<int>(criteria().size()) ? 0 : 1;
}

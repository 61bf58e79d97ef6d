#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vmoser/biot_savart.hpp"
#include "vmoser/cutoff.hpp"
#include "vmoser/flows.hpp"
#include "vmoser/green_disk.hpp"
#include "vmoser/moser.hpp"
#include "vmoser/norms.hpp"
#include "vmoser/parallel.hpp"
#include "vmoser/rational.hpp"
#include "vmoser/riesz.hpp"
#include "vmoser/serrin.hpp"
#include "vmoser/vmf_io.hpp"

namespace vmoser::cli {

namespace fs = std::filesystem;

// Exit codes: 0 success, 1 verification failure (bound violated,
// certificate not granted, condition false), 2 usage/input error.

namespace detail {

struct CylOpts {
    double cx = 0.0, cy = 0.0;
    double radius = 0.0;
    double t1 = std::numeric_limits<double>::quiet_NaN();
    std::string scaling = "euler";
};

inline void add_cylinder_options(CLI::App* sub, CylOpts& c, bool require_radius = true) {
    sub->add_option("--cx", c.cx, "cylinder center x")->capture_default_str();
    sub->add_option("--cy", c.cy, "cylinder center y")->capture_default_str();
    auto* r = sub->add_option("--radius", c.radius, "cylinder spatial radius");
    if (require_radius) r->required();
    sub->add_option("--t1", c.t1, "cylinder top time (default: end of the data)");
    sub->add_option("--scaling", c.scaling, "time-interval scaling: euler (|I| = r) or parabolic (|I| = r^2)")
        ->check(CLI::IsMember({"euler", "parabolic"}))
        ->capture_default_str();
}

inline Cylinder resolve_cylinder(const CylOpts& c, const SpaceTimeField& data) {
    double t1 = std::isnan(c.t1) ? data.cylinder().t1 : c.t1;
    Cylinder::Scaling sc = scaling_from_name(c.scaling);
    Cylinder q{{c.cx, c.cy}, c.radius, t1 - Cylinder::interval_length(sc, c.radius), t1, sc};
    q.validate();
    return q;
}

inline std::string& config_sink() {
    static std::string path;
    return path;
}

inline void configure(CLI::App* sub) {
    sub->add_option("--config", config_sink(),
                    "key=value parameter file (# comments); keys name this subcommand's options, "
                    "unknown keys are rejected; explicit flags win over the file");
    sub->fallthrough();
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

/// Expands `--config FILE` into `--key=value` tokens inserted in place, so
/// the file's keys resolve against the subcommand's own options and unknown
/// keys fail the parse. Command-line options override file entries.
inline std::vector<std::string> expand_config_args(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        std::size_t insert_at = 0;
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) break;  // CLI11 reports the missing value
            path = args[i + 1];
            insert_at = i + 2;
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            insert_at = i + 1;
        } else {
            continue;
        }
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config: " + path);
        std::vector<std::string> extra;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            auto eq = t.find('=');
            if (eq == std::string::npos || eq == 0)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": expected key=value");
            std::string opt = "--" + trim(t.substr(0, eq));
            bool overridden = false;
            for (const auto& a : args)
                if (a == opt || a.rfind(opt + "=", 0) == 0) {
                    overridden = true;
                    break;
                }
            if (!overridden) extra.push_back(opt + "=" + trim(t.substr(eq + 1)));
        }
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), extra.begin(),
                    extra.end());
        break;
    }
    return args;
}

inline std::vector<double> read_boundary_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<double> vals;
    double v;
    while (in >> v) vals.push_back(v);
    if (vals.empty()) throw std::runtime_error("boundary file has no samples: " + path);
    return vals;
}

inline void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("short write: " + path.string());
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
    CLI::App app{"vortex-moser: velocity reconstruction on the disk, Riesz/HLS certification,\n"
                 "iteration ledgers, exponential-integrability certificates, and exponent algebra\n"
                 "for 2-D incompressible flow data"};
    app.name("vortex-moser");
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads,
                   "cap worker threads (0 = VORTEX_MOSER_THREADS env or all cores)")
        ->capture_default_str();

    // ------------------------------------------------------------ generate
    auto* gen = app.add_subcommand("generate", "sample a radial vortex (and optionally advect it) to VMF1 files");
    detail::configure(gen);
    std::string g_kind;
    double g_omega0 = 1.0, g_core = 0.5, g_circulation = 1.0, g_nu = 0.05, g_time = 1.0;
    int g_n = 128, g_steps = 0;
    double g_half = 1.2, g_mask = 1.0, g_dt = 0.05;
    std::string g_out = ".", g_base = "flow";
    gen->add_option("--kind", g_kind, "profile: rankine | lamb-oseen | log-example")
        ->check(CLI::IsMember({"rankine", "lamb-oseen", "log-example"}))
        ->required();
    gen->add_option("--omega0", g_omega0, "rankine core vorticity")->capture_default_str();
    gen->add_option("--core", g_core, "rankine core radius")->capture_default_str();
    gen->add_option("--circulation", g_circulation, "lamb-oseen total circulation")->capture_default_str();
    gen->add_option("--nu", g_nu, "lamb-oseen viscosity")->capture_default_str();
    gen->add_option("--time", g_time, "lamb-oseen age t (core^2 = 4 nu t)")->capture_default_str();
    gen->add_option("--n", g_n, "grid cells per side")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--half-width", g_half, "window half-width")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--mask", g_mask, "disk mask radius")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--steps", g_steps, "advection steps (0 = static snapshot)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    gen->add_option("--dt", g_dt, "advection time step")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--out", g_out, "output directory")->capture_default_str();
    gen->add_option("--base", g_base, "output base name")->capture_default_str();

    // --------------------------------------------------------- reconstruct
    auto* rec = app.add_subcommand("reconstruct", "velocity from a vorticity snapshot via the disk kernel");
    detail::configure(rec);
    std::string r_omega, r_out, r_boundary;
    double r_kx = 0.0, r_ky = 0.0;
    rec->add_option("--omega", r_omega, "input vorticity .vmf (masked scalar)")->required();
    rec->add_option("--out", r_out, "output velocity .vmf")->required();
    rec->add_option("--boundary", r_boundary, "file of boundary stream samples, one per line (default: zero)");
    rec->add_option("--kx", r_kx, "constant drift x")->capture_default_str();
    rec->add_option("--ky", r_ky, "constant drift y")->capture_default_str();

    // -------------------------------------------------------- verify-bound
    auto* vb = app.add_subcommand("verify-bound", "pointwise velocity bound check on a cylinder, CSV per slice");
    detail::configure(vb);
    std::string vb_u, vb_w, vb_csv, vb_mode = "fixed";
    detail::CylOpts vb_cyl;
    double vb_sigma = 0.5, vb_eps = 1.0, vb_kx = 0.0, vb_ky = 0.0;
    vb->add_option("--u", vb_u, "velocity manifest")->required();
    vb->add_option("--omega", vb_w, "vorticity manifest")->required();
    detail::add_cylinder_options(vb, vb_cyl);
    vb->add_option("--sigma", vb_sigma, "interior fraction sigma in (0,1)")->capture_default_str();
    vb->add_option("--mode", vb_mode, "comparison constant: fixed | mean-shift")
        ->check(CLI::IsMember({"fixed", "mean-shift"}))
        ->capture_default_str();
    vb->add_option("--kx", vb_kx, "fixed-mode constant x")->capture_default_str();
    vb->add_option("--ky", vb_ky, "fixed-mode constant y")->capture_default_str();
    vb->add_option("--epsilon", vb_eps, "integrability margin epsilon > 0")->capture_default_str();
    vb->add_option("--csv", vb_csv, "write per-slice CSV here");

    // ------------------------------------------------------------ ve-check
    auto* ve = app.add_subcommand("ve-check", "vorticity-energy inequality check under a space-time cutoff");
    detail::configure(ve);
    std::string ve_u, ve_w, ve_scaling = "euler";
    double ve_alpha = 0.0, ve_cx = 0.0, ve_cy = 0.0;
    double ve_ir = 0.0, ve_or = 0.0;
    double ve_it0 = std::numeric_limits<double>::quiet_NaN();
    double ve_ot0 = std::numeric_limits<double>::quiet_NaN();
    double ve_t1 = std::numeric_limits<double>::quiet_NaN();
    bool ve_nsve = false;
    ve->add_option("--u", ve_u, "velocity manifest")->required();
    ve->add_option("--omega", ve_w, "vorticity manifest")->required();
    ve->add_option("--alpha", ve_alpha, "moment exponent alpha in [0,1)")->capture_default_str();
    ve->add_flag("--nsve", ve_nsve, "dissipative variant (adds the gradient term)");
    ve->add_option("--cx", ve_cx, "cutoff center x")->capture_default_str();
    ve->add_option("--cy", ve_cy, "cutoff center y")->capture_default_str();
    ve->add_option("--inner-radius", ve_ir, "inner cylinder radius")->required();
    ve->add_option("--outer-radius", ve_or, "outer cylinder radius")->required();
    ve->add_option("--inner-t0", ve_it0, "inner start time (default: midpoint)");
    ve->add_option("--outer-t0", ve_ot0, "outer start time (default: start of the data)");
    ve->add_option("--t1", ve_t1, "shared top time (default: end of the data)");
    ve->add_option("--scaling", ve_scaling, "cylinder scaling label: euler | parabolic")
        ->check(CLI::IsMember({"euler", "parabolic"}))
        ->capture_default_str();

    // -------------------------------------------------------------- ledger
    auto* lg = app.add_subcommand("ledger", "iteration ledger q_k = 2^k eps + 2 on shrinking cylinders, CSV");
    detail::configure(lg);
    std::string lg_u, lg_w, lg_csv;
    detail::CylOpts lg_cyl;
    double lg_eps = 1.0;
    int lg_j = 3;
    lg->add_option("--u", lg_u, "velocity manifest")->required();
    lg->add_option("--omega", lg_w, "vorticity manifest")->required();
    detail::add_cylinder_options(lg, lg_cyl);
    lg->add_option("--epsilon", lg_eps, "exponent offset eps > 0")->capture_default_str();
    lg->add_option("--j", lg_j, "iteration depth")->check(CLI::PositiveNumber)->capture_default_str();
    lg->add_option("--csv", lg_csv, "also write the CSV here");

    // ------------------------------------------------------------- certify
    auto* cf = app.add_subcommand("certify", "exponential-integrability certificate from a ledger");
    detail::configure(cf);
    std::string cf_u, cf_w, cf_out;
    detail::CylOpts cf_cyl;
    double cf_eps = 1.0, cf_C1 = 1.0;
    int cf_j = 3;
    cf->add_option("--u", cf_u, "velocity manifest")->required();
    cf->add_option("--omega", cf_w, "vorticity manifest")->required();
    detail::add_cylinder_options(cf, cf_cyl);
    cf->add_option("--epsilon", cf_eps, "exponent offset eps > 0")->capture_default_str();
    cf->add_option("--j", cf_j, "iteration depth")->check(CLI::PositiveNumber)->capture_default_str();
    cf->add_option("--C1", cf_C1, "certificate constant C1 > 0")->capture_default_str();
    cf->add_option("--out", cf_out, "also write the report here");

    // ----------------------------------------------------------------- hls
    auto* hl = app.add_subcommand("hls", "fractional-integration ratio and constant bound on indicator data");
    detail::configure(hl);
    double h_beta = 1.0, h_q = 1.5, h_mask = 0.5, h_half = 0.0, h_lambda = 1.0;
    int h_n = 128;
    hl->add_option("--beta", h_beta, "order beta in (0,2)")->capture_default_str();
    hl->add_option("--q", h_q, "source exponent q in (1, 2/beta)")->capture_default_str();
    hl->add_option("--n", h_n, "grid cells per side")->check(CLI::PositiveNumber)->capture_default_str();
    hl->add_option("--mask", h_mask, "indicator disk radius")->check(CLI::PositiveNumber)->capture_default_str();
    hl->add_option("--half-width", h_half, "window half-width (default: 3x the radius)");
    hl->add_option("--lambda", h_lambda, "also evaluate the dilated indicator of radius mask/lambda")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // -------------------------------------------------------------- serrin
    auto* sr = app.add_subcommand("serrin", "regularity exponent verdicts (exact rational arithmetic)");
    detail::configure(sr);
    int s_d = 3;
    std::string s_q, s_s, s_qstar, s_sstar, s_format = "text";
    sr->add_option("--d", s_d, "space dimension")->capture_default_str();
    sr->add_option("--q", s_q, "time exponent (rational, decimal, or inf)")->required();
    sr->add_option("--s", s_s, "space exponent (rational, decimal, or inf)")->required();
    sr->add_option("--q-star", s_qstar, "trial Sobolev pair member q* (default: the dual q0)");
    sr->add_option("--s-star", s_sstar, "trial Sobolev pair member s* (default: the dual s0)");
    sr->add_option("--format", s_format, "report format: text | csv")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();

    // ---------------------------------------------------------------- demo
    auto* dm = app.add_subcommand("demo", "end-to-end pinned run: vortex -> advection -> ledger -> certificate");
    detail::configure(dm);
    std::string dm_out = "demo_out";
    dm->add_option("--out", dm_out, "output directory")->capture_default_str();

    std::vector<std::string> args;
    try {
        args = detail::expand_config_args(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::reverse(args.begin(), args.end());  // CLI11's vector API takes reversed args
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    set_thread_cap(threads < 0 ? 0u : static_cast<unsigned>(threads));

    try {
        if (gen->parsed()) {
            RadialVorticity prof =
                g_kind == "rankine"      ? RadialVorticity::rankine(g_omega0, g_core)
                : g_kind == "lamb-oseen" ? RadialVorticity::lamb_oseen(g_circulation, g_nu, g_time)
                                         : RadialVorticity::log_example();
            GridSpec grid = make_square_grid({0.0, 0.0}, g_half, g_n);
            RadialFlowPair pair = radial_velocity(prof, grid, g_mask);
            fs::create_directories(g_out);
            if (g_steps == 0) {
                fs::path wp = fs::path(g_out) / (g_base + "_omega.vmf");
                fs::path up = fs::path(g_out) / (g_base + "_velocity.vmf");
                write_vmf(wp, pair.vorticity);
                write_vmf(up, pair.velocity);
                std::cout << "wrote " << wp.string() << "\nwrote " << up.string() << "\n";
            } else {
                AdvectionResult adv = advect(pair.vorticity, g_dt, g_steps);
                fs::path m1 = write_space_time(g_out, g_base + "_omega", adv.omega);
                fs::path m2 = write_space_time(g_out, g_base + "_velocity", adv.velocity);
                std::cout << "wrote " << m1.string() << "\nwrote " << m2.string() << "\n";
            }
            return 0;
        }

        if (rec->parsed()) {
            GridField2D w = read_vmf(r_omega);
            std::vector<double> boundary = r_boundary.empty()
                                               ? std::vector<double>(64, 0.0)
                                               : detail::read_boundary_file(r_boundary);
            GridField2D u = reconstruct_velocity(w, boundary, {r_kx, r_ky});
            write_vmf(r_out, u);
            double umax = lq_norm(u, std::numeric_limits<double>::infinity()).value;
            std::cout << "wrote " << r_out << "\nmax_speed=" << fmt17(umax) << "\n";
            return 0;
        }

        if (vb->parsed()) {
            SpaceTimeField u = read_space_time(vb_u);
            SpaceTimeField w = read_space_time(vb_w);
            Cylinder Q = detail::resolve_cylinder(vb_cyl, w);
            BoundMode mode = vb_mode == "fixed" ? BoundMode::fixed_k : BoundMode::mean_shift;
            BiotSavartBound rep = verify_local_bound(u, w, Q, vb_sigma, mode, {vb_kx, vb_ky}, vb_eps);
            std::string csv = bound_csv(rep);
            if (!vb_csv.empty()) detail::write_text(vb_csv, csv);
            std::cout << csv;
            std::cout << "fitted_C=" << fmt17(rep.fitted_C) << "\n";
            std::cout << "gamma_q=" << fmt17(rep.gamma_q) << "\n";
            std::cout << "binding_t=" << fmt17(rep.rows[rep.binding_slice].t) << "\n";
            std::cout << "uniform_in_time=" << (rep.uniform_in_time ? "true" : "false") << "\n";
            return std::isfinite(rep.fitted_C) ? 0 : 1;
        }

        if (ve->parsed()) {
            SpaceTimeField u = read_space_time(ve_u);
            SpaceTimeField w = read_space_time(ve_w);
            double t1 = std::isnan(ve_t1) ? w.cylinder().t1 : ve_t1;
            double ot0 = std::isnan(ve_ot0) ? w.cylinder().t0 : ve_ot0;
            double it0 = std::isnan(ve_it0) ? 0.5 * (ot0 + t1) : ve_it0;
            Cylinder::Scaling sc = scaling_from_name(ve_scaling);
            Cylinder inner{{ve_cx, ve_cy}, ve_ir, it0, t1, sc};
            Cylinder outer{{ve_cx, ve_cy}, ve_or, ot0, t1, sc};
            VeReport rep = ve_check(u, w, make_cutoff(inner, outer), ve_alpha, ve_nsve);
            std::cout << "alpha=" << fmt17(rep.alpha) << "\n";
            std::cout << "nsve=" << (rep.nsve ? "true" : "false") << "\n";
            std::cout << "lhs=" << fmt17(rep.lhs) << "\n";
            std::cout << "lhs_esssup=" << fmt17(rep.lhs_esssup) << "\n";
            std::cout << "lhs_gradient=" << fmt17(rep.lhs_gradient) << "\n";
            std::cout << "rhs_transport=" << fmt17(rep.rhs_transport) << "\n";
            std::cout << "rhs_time=" << fmt17(rep.rhs_time) << "\n";
            std::cout << "fitted_V0=" << fmt17(rep.fitted_V0) << "\n";
            return std::isfinite(rep.fitted_V0) ? 0 : 1;
        }

        if (lg->parsed()) {
            SpaceTimeField u = read_space_time(lg_u);
            SpaceTimeField w = read_space_time(lg_w);
            Cylinder Q0 = detail::resolve_cylinder(lg_cyl, w);
            IterationLedger led = build_ledger(u, w, Q0, lg_eps, lg_j);
            std::string csv = ledger_csv(led);
            if (!lg_csv.empty()) detail::write_text(lg_csv, csv);
            std::cout << csv;
            std::cout << "q_star=" << fmt17(led.q_star) << "\n";
            std::cout << "c_hat=" << fmt17(led.c_hat) << "\n";
            std::cout << "c0=" << fmt17(led.c0) << "\n";
            std::cout << "lambda0=" << fmt17(led.lambda0) << "\n";
            std::cout << "gamma=" << fmt17(led.gamma) << "\n";
            std::cout << "fitted_final=" << fmt17(led.fitted_final) << "\n";
            return 0;
        }

        if (cf->parsed()) {
            SpaceTimeField u = read_space_time(cf_u);
            SpaceTimeField w = read_space_time(cf_w);
            Cylinder Q0 = detail::resolve_cylinder(cf_cyl, w);
            IterationLedger led = build_ledger(u, w, Q0, cf_eps, cf_j);
            ExpCertificate cert = certify_exp(u, led, cf_C1);
            std::string report = certificate_report(cert);
            if (!cf_out.empty()) detail::write_text(cf_out, report);
            std::cout << report;
            return cert.verdict == CertVerdict::certified ? 0 : 1;
        }

        if (hl->parsed()) {
            double half = h_half > 0.0 ? h_half : 3.0 * h_mask;
            GridSpec grid = make_square_grid({0.0, 0.0}, half, h_n);
            GridField2D f(grid, 1, std::vector<double>(grid.cell_count(), 1.0), h_mask);
            HlsReport rep = hls_ratio(f, h_beta, h_q);
            std::cout << "beta,q,s,lhs,rhs,ratio,constant_bound,within_bound\n";
            auto row = [](const HlsReport& r) {
                std::ostringstream out;
                out << fmt17(r.beta) << ',' << fmt17(r.q) << ',' << fmt17(r.s) << ','
                    << fmt17(r.lhs) << ',' << fmt17(r.rhs) << ',' << fmt17(r.ratio) << ','
                    << fmt17(r.constant_bound) << ',' << (r.within_bound ? "true" : "false")
                    << '\n';
                return out.str();
            };
            std::cout << row(rep);
            bool ok = rep.within_bound;
            if (h_lambda != 1.0) {
                GridField2D g(grid, 1, std::vector<double>(grid.cell_count(), 1.0),
                              h_mask / h_lambda);
                HlsReport rep2 = hls_ratio(g, h_beta, h_q);
                std::cout << row(rep2);
                std::cout << "dilation_delta=" << fmt17(std::abs(rep2.ratio - rep.ratio)) << "\n";
                ok = ok && rep2.within_bound;
            }
            return ok ? 0 : 1;
        }

        if (sr->parsed()) {
            Exponent q = parse_exponent(s_q), s = parse_exponent(s_s);
            bool ok = serrin_check(s_d, q, s);
            std::cout << "serrin_ok=" << (ok ? "true" : "false") << "\n";
            ExponentReport rep;
            try {
                if (s_qstar.empty() || s_sstar.empty())
                    rep = absorption_feasible(s_d, q, s);
                else
                    rep = absorption_ok(s_d, q, s, parse_exponent(s_qstar), parse_exponent(s_sstar));
            } catch (const std::invalid_argument&) {
                rep.d = s_d;
                rep.q = q;
                rep.s = s;
                rep.kappa = kappa(s_d);
                rep.two_star = two_star(s_d);
                rep.serrin_ok = ok;
            }
            std::cout << (s_format == "csv" ? exponent_report_csv(rep) : exponent_report_text(rep));
            return ok ? 0 : 1;
        }

        if (dm->parsed()) {
            // Pinned end-to-end run: a spreading vortex advected for 7 steps
            // on a 128^2 window (8 slices), then the depth-3 ledger with
            // eps = 1 and the certificate with C1 = 1.
            RadialVorticity prof = RadialVorticity::lamb_oseen(0.2, 0.05, 1.0);
            GridSpec grid = make_square_grid({0.0, 0.0}, 1.2, 128);
            RadialFlowPair pair = radial_velocity(prof, grid, 1.0);
            AdvectionResult adv = advect(pair.vorticity, 0.05, 7);
            fs::create_directories(dm_out);
            fs::path m1 = write_space_time(dm_out, "demo_omega", adv.omega);
            fs::path m2 = write_space_time(dm_out, "demo_velocity", adv.velocity);
            std::cout << "wrote " << m1.string() << "\nwrote " << m2.string() << "\n";

            Cylinder Q0 = Cylinder::parabolic({0.0, 0.0}, 0.5, 0.35);
            IterationLedger led = build_ledger(adv.velocity, adv.omega, Q0, 1.0, 3);
            std::string csv = ledger_csv(led);
            detail::write_text(fs::path(dm_out) / "ledger.csv", csv);
            std::cout << csv;
            std::cout << "gamma=" << fmt17(led.gamma) << "\n";

            ExpCertificate cert = certify_exp(adv.velocity, led, 1.0);
            std::string report = certificate_report(cert);
            detail::write_text(fs::path(dm_out) / "certificate.txt", report);
            std::cout << report;
            return cert.verdict == CertVerdict::certified ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace vmoser::cli

// Command-line laboratory: spectra, level spacing, exponential sums and the
// exploration-graph moment calculus for skew-shift phase matrices.

#include <chrono>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "skewlab/errors.hpp"
#include "skewlab/expsum.hpp"
#include "skewlab/graphs.hpp"
#include "skewlab/io.hpp"
#include "skewlab/model.hpp"
#include "skewlab/moments.hpp"
#include "skewlab/spectra.hpp"

#include "json.hpp"

namespace {

using namespace skewlab;
using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string join_path(const std::string& dir, const std::string& file) {
    if (dir.empty() || dir == ".") return file;
    return dir.back() == '/' ? dir + file : dir + "/" + file;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw input_error("empty integer list '" + text + "'");
    return out;
}

Rat parse_rat(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos)
        return Rat(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rat(std::stoll(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    int fracs = static_cast<int>(text.size() - dot - 1);
    long long den = 1;
    for (int i = 0; i < fracs; ++i) den *= 10;
    return Rat(std::stoll(digits), den);
}

ModelConfig resolve_model(const std::string& model, int N, double rho, const std::string& freq,
                          std::uint64_t seed) {
    if (model == "skewshift") {
        if (freq.empty()) throw input_error("--model skewshift requires --freq");
        return skewshift_config(N, rho, parse_freq_spec(freq), seed);
    }
    if (model == "A" || model == "B" || model == "C") {
        if (rho != 1.0) throw input_error("table models are square (rho = 1)");
        return table_model_config(model[0], N);
    }
    throw input_error("unknown model '" + model + "' (skewshift|A|B|C)");
}

// ---------------------------------------------------------------------------

int cmd_spectrum(const std::string& model, int N, double rho, const std::string& freq,
                 std::uint64_t seed, int bins, int kmax, const std::string& out_dir,
                 RunManifest& manifest) {
    auto t0 = clock_type::now();
    ModelConfig cfg = resolve_model(model, N, rho, freq, seed);
    PhaseMatrix X = build_matrix(cfg);
    double t_build = since(t0);

    t0 = clock_type::now();
    SpectralSummary s = spectral_summary(X, kmax);
    double t_eigen = since(t0);

    Histogram h = make_histogram(s.eigs, bins);
    auto dens_full = h.densities(static_cast<std::int64_t>(s.eigs.size()));

    CsvWriter esd(join_path(out_dir, "esd.csv"),
                  {"bin_left", "bin_right", "density", "density_1n"});
    esd.meta("model", model);
    esd.meta("config", cfg.to_json());
    esd.meta("version", k_version);
    for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b) {
        double width = h.bin_edges[b + 1] - h.bin_edges[b];
        esd.row_values({h.bin_edges[b], h.bin_edges[b + 1], dens_full[b],
                        double(h.counts[b]) / (double(cfg.N) * width)});
    }
    esd.write();
    manifest.add_output(esd.path());

    CsvWriter mom(join_path(out_dir, "moments.csv"), {"k", "mu2k"});
    mom.meta("model", model);
    mom.meta("config", cfg.to_json());
    for (int k = 1; k <= kmax; ++k) mom.row_values({double(k), s.moments[k - 1]});
    mom.write();
    manifest.add_output(mom.path());

    double ks_sc = ks_distance(s.eigs, semicircle_cdf);
    nlohmann::json summary;
    summary["config"] = nlohmann::json::parse(cfg.to_json());
    summary["model"] = model;
    summary["y_seed"] = cfg.y_seed;
    summary["moments"] = s.moments;
    summary["ks_semicircle"] = ks_sc;
    summary["sigma_max"] = s.sigma.empty() ? 0.0 : s.sigma.front();
    summary["timings_sec"] = {{"build", t_build}, {"eigen", t_eigen}};
    summary["version"] = k_version;
    std::string summary_path = join_path(out_dir, "summary.json");
    {
        std::ofstream out(summary_path);
        out << summary.dump(2) << "\n";
    }
    manifest.add_output(summary_path);

    manifest.set_seed("y_seed", cfg.y_seed);
    manifest.add_timing("build", t_build);
    manifest.add_timing("eigen", t_eigen);

    std::printf("spectrum: model=%s N=%d M=%d mu2=%.9f", model.c_str(), cfg.N, cfg.M,
                s.moments[0]);
    if (kmax >= 2) std::printf(" mu4=%.6f", s.moments[1]);
    std::printf(" ks_semicircle=%.4f\n", ks_sc);
    return 0;
}

int cmd_spacing(const std::string& model, int N, double rho, const std::string& freq,
                std::uint64_t seed, double energy, double cutoff_exp, int bins,
                const std::string& out_dir, RunManifest& manifest) {
    auto t0 = clock_type::now();
    ModelConfig cfg = resolve_model(model, N, rho, freq, seed);
    PhaseMatrix X = build_matrix(cfg);
    SpectralSummary s = spectral_summary(X, 2);
    double cutoff = std::pow(double(N), -cutoff_exp);
    SpacingSample sp = level_spacing(s.eigs, energy, cutoff, cfg.N);
    double ks = ks_distance(sp.s_values, wigner_surmise_cdf);
    double t_all = since(t0);

    double s_hi = 4.0;
    for (double v : sp.s_values) s_hi = std::max(s_hi, v);
    Histogram h = make_histogram(sp.s_values, bins, 0.0, s_hi);
    auto dens = h.densities(static_cast<std::int64_t>(sp.s_values.size()));

    CsvWriter csv(join_path(out_dir, "spacing.csv"), {"s", "count", "density", "surmise"});
    csv.meta("model", model);
    csv.meta("config", cfg.to_json());
    csv.meta("energy", format_double(energy));
    csv.meta("cutoff", format_double(cutoff));
    csv.meta("gaps", std::to_string(sp.s_values.size()));
    for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b) {
        double mid = 0.5 * (h.bin_edges[b] + h.bin_edges[b + 1]);
        csv.row_values({mid, double(h.counts[b]), dens[b], wigner_surmise(mid)});
    }
    csv.write();
    manifest.add_output(csv.path());

    nlohmann::json summary;
    summary["config"] = nlohmann::json::parse(cfg.to_json());
    summary["energy"] = energy;
    summary["cutoff"] = cutoff;
    summary["ks_wigner"] = ks;
    summary["gap_count"] = sp.s_values.size();
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& [sv, lv] : sp.lambda_cdf) grid.push_back({sv, lv});
    summary["lambda_cdf"] = grid;
    summary["timings_sec"] = {{"total", t_all}};
    std::string summary_path = join_path(out_dir, "spacing_summary.json");
    {
        std::ofstream out(summary_path);
        out << summary.dump(2) << "\n";
    }
    manifest.add_output(summary_path);
    manifest.set_seed("y_seed", cfg.y_seed);
    manifest.add_timing("total", t_all);

    std::printf("spacing: model=%s N=%d E=%g t=%.4f gaps=%zu KS(spacing,surmise)=%.4f\n",
                model.c_str(), N, energy, cutoff, sp.s_values.size(), ks);
    return 0;
}

int cmd_expsum(const std::string& freq_text, const std::vector<int>& n_list,
               const std::string& method, double rho, int samples, std::uint64_t seed,
               const std::string& out_dir, RunManifest& manifest) {
    FrequencySpec spec = parse_freq_spec(freq_text);
    CsvWriter csv(join_path(out_dir, "expsum.csv"), {"N", "method", "value", "seconds"});
    csv.meta("freq", freq_text);
    csv.meta("rho", format_double(rho));

    std::vector<double> decay_values;
    for (int N : n_list) {
        if (method == "brute" && N > 128) throw size_error("brute method capped at N=128");
        int M = static_cast<int>(std::floor(rho * N));
        ESResult r;
        if (method == "mean-random") {
            auto t0 = clock_type::now();
            MeanESResult m = random_freq_mean(N, rho, samples, seed);
            r.N = N;
            r.M = M;
            r.value = m.mean;
            r.seconds = since(t0);
            std::printf("expsum mean-random: N=%d samples=%d mean=%.6g stderr=%.3g\n", N, samples,
                        m.mean, m.stderr_);
        } else {
            FrequencySequence freq = make_frequencies(spec, M, N);
            if (method == "brute")
                r = es_bruteforce(freq, N, rho);
            else if (method == "square")
                r = es_completed_square(freq, N, rho);
            else if (method == "bound")
                r = es_geometric_bound(freq, N, rho);
            else
                throw input_error("unknown method '" + method + "' (brute|square|bound|mean-random)");
            std::printf("expsum %s: N=%d value=%.8g (%.2fs)\n", method.c_str(), N, r.value,
                        r.seconds);
        }
        csv.row({std::to_string(N), method, format_double(r.value), format_double(r.seconds)});
        decay_values.push_back(r.value);
    }
    csv.write();
    manifest.add_output(csv.path());

    if (n_list.size() >= 3 && method != "bound") {
        bool positive = true;
        for (double v : decay_values) positive = positive && v > 0.0;
        if (positive) {
            DecayFit fit = fit_loglog(n_list, decay_values);
            CsvWriter dec(join_path(out_dir, "decay.csv"), {"kind", "N", "es", "fitted_slope"});
            dec.meta("r2", format_double(fit.r2));
            for (std::size_t i = 0; i < n_list.size(); ++i)
                dec.row({freq_text, std::to_string(n_list[i]), format_double(decay_values[i]),
                         format_double(fit.slope)});
            dec.write();
            manifest.add_output(dec.path());
            std::printf("expsum decay: slope=%.4f r2=%.4f\n", fit.slope, fit.r2);
        }
    }
    manifest.set_seed("seed", seed);
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_graphs_enumerate(int k, const std::string& out_dir, RunManifest& manifest) {
    auto explorations = enumerate_explorations(k);
    CsvWriter csv(join_path(out_dir, "explorations.csv"), {"id", "k", "l", "nu", "reducible"});
    nlohmann::json graphs = nlohmann::json::array();
    for (std::size_t id = 0; id < explorations.size(); ++id) {
        const auto& e = explorations[id];
        std::ostringstream nu;
        for (std::size_t i = 0; i < e.nu.size(); ++i) nu << (i ? "-" : "") << e.nu[i];
        bool red = is_fully_reducible(to_multigraph(exploration_graph(e)));
        csv.row({std::to_string(id), std::to_string(e.k), std::to_string(e.l), nu.str(),
                 red ? "1" : "0"});
        graphs.push_back(nlohmann::json::parse(exploration_graph(e).to_json()));
    }
    csv.write();
    manifest.add_output(csv.path());
    std::string gpath = join_path(out_dir, "graphs_k" + std::to_string(k) + ".json");
    {
        std::ofstream out(gpath);
        out << graphs.dump(2) << "\n";
    }
    manifest.add_output(gpath);
    std::printf("graphs enumerate: k=%d count=%zu\n", k, explorations.size());
    return 0;
}

int cmd_graphs_goodcycles(int k, const std::string& out_dir, RunManifest& manifest) {
    auto explorations = enumerate_explorations(k);
    CsvWriter csv(join_path(out_dir, "goodcycles.csv"),
                  {"id", "k", "l", "reduced_vertices", "reduced_edges", "is_point",
                   "good_cycle_len"});
    int violations = 0;
    for (std::size_t id = 0; id < explorations.size(); ++id) {
        auto [reduced, log] = preprocess(to_multigraph(exploration_graph(explorations[id])));
        int cyc_len = 0;
        if (!reduced.is_point()) {
            auto good = find_good_cycle(reduced);
            if (!good) {
                ++violations;
                std::fprintf(stderr, "good-cycle violation: exploration id=%zu %s\n", id,
                             reduced.to_string().c_str());
            } else {
                cyc_len = good->cycle.length();
            }
        }
        csv.row({std::to_string(id), std::to_string(explorations[id].k),
                 std::to_string(explorations[id].l), std::to_string(reduced.vertices.size()),
                 std::to_string(reduced.edges.size()), reduced.is_point() ? "1" : "0",
                 std::to_string(cyc_len)});
    }
    csv.write();
    manifest.add_output(csv.path());
    std::printf("graphs goodcycles: k=%d explorations=%zu violations=%d\n", k,
                explorations.size(), violations);
    if (violations > 0) throw property_violation_error("good cycle missing");
    return 0;
}

int cmd_graphs_phi(int k, int N, const std::string& freq_text, double rho,
                   const std::string& out_dir, RunManifest& manifest) {
    FrequencySpec spec = parse_freq_spec(freq_text);
    int M = static_cast<int>(std::floor(rho * N));
    FrequencySequence freq = make_frequencies(spec, M, N);
    PropagatorSpec prop = PropagatorSpec::effective(freq, N, M);

    auto explorations = enumerate_explorations(k);
    CsvWriter csv(join_path(out_dir, "phi.csv"), {"graph_id", "N", "re", "im", "abs"});
    csv.meta("freq", freq_text);
    csv.meta("rho", format_double(rho));
    std::complex<double> total = 0.0;
    for (std::size_t id = 0; id < explorations.size(); ++id) {
        std::complex<double> v = phi(exploration_graph(explorations[id]), prop);
        total += v;
        csv.row_values({double(id), double(N), v.real(), v.imag(), std::abs(v)});
    }
    csv.write();
    manifest.add_output(csv.path());
    std::printf("graphs phi: k=%d N=%d graph_sum=%.8f (expected E_y mu^(2k))\n", k, N,
                total.real());
    return 0;
}

int cmd_graphs_recursion(int kmax, const std::string& rho_text, const std::string& out_dir,
                         RunManifest& manifest) {
    Rat rho = parse_rat(rho_text);
    MomentTable t = recursion_moments(kmax, rho, RecursionForm::Proof);
    bool rho_is_one = (rho.num == 1 && rho.den == 1);
    CsvWriter csv(join_path(out_dir, "recursion.csv"), {"k", "mu_tilde", "catalan_if_rho1"});
    csv.meta("rho", rho_text);
    std::ostringstream line;
    for (int k = 0; k <= kmax; ++k) {
        csv.row({std::to_string(k), t.mu_tilde[k].to_string(),
                 rho_is_one ? std::to_string(t.catalan[k]) : ""});
        line << (k ? "," : "") << t.mu_tilde[k].to_string();
    }
    csv.write();
    manifest.add_output(csv.path());
    std::printf("%s\n", line.str().c_str());
    return 0;
}

int cmd_graphs_identity(int k, int N, const std::string& model, const std::string& out_dir,
                        RunManifest& manifest) {
    ModelConfig cfg = resolve_model(model, N, 1.0, "", 0);
    PhaseMatrix X = build_matrix(cfg);
    DeterministicIdentity id = moment_deterministic_identity(k, X);
    CsvWriter csv(join_path(out_dir, "identity.csv"), {"k", "N", "model", "lhs", "rhs", "diff"});
    csv.row({std::to_string(k), std::to_string(N), model, format_double(id.lhs),
             format_double(id.rhs), format_double(id.diff)});
    csv.write();
    manifest.add_output(csv.path());
    std::printf("graphs identity: k=%d N=%d model=%s |trace moment - graph sum| = %.3g\n", k, N,
                model.c_str(), id.diff);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"skewlab - eigenvalue statistics of skew-shift phase matrices"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: all cores)");

    std::string model = "skewshift", freq, out_dir = ".", method = "square", rho_text = "1";
    std::string n_list_text;
    int N = 0, bins = 100, kmax = 4, k = 0, samples = 100;
    double rho = 1.0, energy = 0.0, cutoff_exp = 0.1;
    std::uint64_t seed = 1;

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalue distribution and trace moments");
    spectrum->add_option("--model", model, "skewshift|A|B|C");
    spectrum->add_option("--freq", freq, "frequency spec (skewshift model)");
    spectrum->add_option("--n", N, "matrix dimension N")->required();
    spectrum->add_option("--rho", rho, "aspect ratio M = floor(rho N)");
    spectrum->add_option("--seed", seed, "seed for the y draw");
    spectrum->add_option("--bins", bins, "histogram bins");
    spectrum->add_option("--kmax", kmax, "trace moments up to mu^(2kmax)");
    spectrum->add_option("--out-dir", out_dir, "output directory");

    auto* spacing = app.add_subcommand("spacing", "nearest-neighbor level spacing near E");
    spacing->add_option("--model", model, "skewshift|A|B|C");
    spacing->add_option("--freq", freq, "frequency spec (skewshift model)");
    spacing->add_option("--n", N, "matrix dimension N")->required();
    spacing->add_option("--rho", rho, "aspect ratio");
    spacing->add_option("--seed", seed, "seed for the y draw");
    spacing->add_option("--energy", energy, "energy E in (-2,2)")->required();
    spacing->add_option("--cutoff-exp", cutoff_exp, "window half-width t = N^{-gamma}")
        ->required();
    spacing->add_option("--bins", bins, "histogram bins");
    spacing->add_option("--out-dir", out_dir, "output directory");

    auto* expsum = app.add_subcommand("expsum", "quasi-randomness exponential sums");
    expsum->add_option("--freq", freq, "frequency spec")->required();
    expsum->add_option("--n-list", n_list_text, "comma-separated N values")->required();
    expsum->add_option("--method", method, "brute|square|bound|mean-random");
    expsum->add_option("--rho", rho, "aspect ratio");
    expsum->add_option("--samples", samples, "Monte Carlo samples (mean-random)");
    expsum->add_option("--seed", seed, "Monte Carlo seed");
    expsum->add_option("--out-dir", out_dir, "output directory");

    auto* graphs = app.add_subcommand("graphs", "exploration-graph calculus");
    graphs->require_subcommand(1);
    auto* g_enum = graphs->add_subcommand("enumerate", "list explorations on k edges");
    g_enum->add_option("--k", k, "edge count")->required();
    g_enum->add_option("--out-dir", out_dir, "output directory");
    auto* g_good = graphs->add_subcommand("goodcycles", "good cycles of preprocessed graphs");
    g_good->add_option("--k", k, "edge count")->required();
    g_good->add_option("--out-dir", out_dir, "output directory");
    auto* g_phi = graphs->add_subcommand("phi", "graph weights Phi(G_L)");
    g_phi->add_option("--k", k, "edge count")->required();
    g_phi->add_option("--n", N, "current range N")->required();
    g_phi->add_option("--freq", freq, "frequency spec")->required();
    g_phi->add_option("--rho", rho, "aspect ratio");
    g_phi->add_option("--out-dir", out_dir, "output directory");
    auto* g_rec = graphs->add_subcommand("recursion", "limiting moment recursion");
    g_rec->add_option("--kmax", kmax, "highest moment index")->required();
    g_rec->add_option("--rho", rho_text, "aspect ratio (exact: p/q or decimal)");
    g_rec->add_option("--out-dir", out_dir, "output directory");
    auto* g_id = graphs->add_subcommand("identity", "deterministic graphical identity");
    g_id->add_option("--k", k, "moment index")->required();
    g_id->add_option("--n", N, "matrix dimension")->required();
    g_id->add_option("--model", model, "A|B|C|skewshift")->required();
    g_id->add_option("--out-dir", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    RunManifest manifest(argc, argv);
    manifest.set_config("version", k_version);
    manifest.set_config("threads", std::int64_t(threads));

    try {
        if (!out_dir.empty() && out_dir != ".") std::filesystem::create_directories(out_dir);
        int rc = 1;
        std::string manifest_name;
        if (spectrum->parsed()) {
            rc = cmd_spectrum(model, N, rho, freq, seed, bins, kmax, out_dir, manifest);
            manifest_name = "spectrum_manifest.json";
        } else if (spacing->parsed()) {
            rc = cmd_spacing(model, N, rho, freq, seed, energy, cutoff_exp, bins, out_dir,
                             manifest);
            manifest_name = "spacing_manifest.json";
        } else if (expsum->parsed()) {
            rc = cmd_expsum(freq, parse_int_list(n_list_text), method, rho, samples, seed,
                            out_dir, manifest);
            manifest_name = "expsum_manifest.json";
        } else if (graphs->parsed()) {
            if (g_enum->parsed()) rc = cmd_graphs_enumerate(k, out_dir, manifest);
            if (g_good->parsed()) rc = cmd_graphs_goodcycles(k, out_dir, manifest);
            if (g_phi->parsed()) rc = cmd_graphs_phi(k, N, freq, rho, out_dir, manifest);
            if (g_rec->parsed()) rc = cmd_graphs_recursion(kmax, rho_text, out_dir, manifest);
            if (g_id->parsed()) rc = cmd_graphs_identity(k, N, model, out_dir, manifest);
            manifest_name = "graphs_manifest.json";
        }
        manifest.write(join_path(out_dir, manifest_name));
        return rc;
    } catch (const empty_window_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const property_violation_error& e) {
        std::fprintf(stderr, "property violation: %s\n", e.what());
        return 4;
    } catch (const size_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const input_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

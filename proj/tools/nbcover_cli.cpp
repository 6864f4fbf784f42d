// nbcover: random covering maps of a base graph, non-backtracking spectra,
// tangle detection and trace experiments. See README.md for usage.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "nbcover/covers.hpp"
#include "nbcover/gen.hpp"
#include "nbcover/nblang.hpp"
#include "nbcover/reports.hpp"
#include "nbcover/sidestep.hpp"
#include "nbcover/spectra.hpp"
#include "nbcover/tangles.hpp"
#include "nbcover/tracelab.hpp"

namespace {

using namespace nbcover;

constexpr const char* kVersion = "nbcover 0.1.0";

Graph parse_graph_spec(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto ints = [&rest]() {
        std::vector<int> out;
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
        return out;
    };
    if (kind == "bouquet") {
        auto v = ints();
        if (v.size() != 2) throw ParseError("bouquet:a,b expects two integers");
        return Graph::bouquet(v[0], v[1]);
    }
    if (kind == "cycle") {
        auto v = ints();
        if (v.size() != 1) throw ParseError("cycle:k expects one integer");
        return Graph::cycle(v[0]);
    }
    if (kind == "theta") {
        auto v = ints();
        if (v.size() != 3) throw ParseError("theta:l1,l2,l3 expects three integers");
        return Graph::theta(v[0], v[1], v[2]);
    }
    if (kind == "file") return load_graph(rest);
    throw ParseError("unknown graph spec: " + spec +
                     " (use bouquet:a,b | cycle:k | theta:l1,l2,l3 | file:path)");
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw ParseError("empty integer list");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw ParseError("empty list");
    return out;
}

std::string join_spectrum(const std::vector<double>& xs) {
    std::string out = "{";
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_number(xs[i]);
    }
    return out + "}";
}

std::string join_complex(const std::vector<std::complex<double>>& xs) {
    std::string out = "{";
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_number(xs[i].real());
        if (std::abs(xs[i].imag()) > 1e-9) out += "+" + format_number(xs[i].imag()) + "i";
    }
    return out + "}";
}

struct OutputSink {
    std::string dir;
    Json manifest;
    std::vector<std::pair<std::string, std::string>> files;  // name -> content

    void stage(const std::string& name, const std::string& content) {
        files.emplace_back(name, content);
    }

    // nothing touches the filesystem until the whole run has succeeded
    void flush() {
        if (dir.empty()) return;
        std::filesystem::create_directories(dir);
        Json names = Json::array();
        for (auto& [name, content] : files) {
            write_file(dir + "/" + name, content);
            names.push_back(name);
        }
        manifest["outputs"] = names;
        write_file(dir + "/manifest.json", manifest.dump(2) + "\n");
    }
};

ProgressFn progress_printer(bool enabled) {
    if (!enabled) return {};
    return [](int trial, int total, int n) {
        if ((trial + 1) % std::max(1, total / 10) == 0 || trial + 1 == total)
            std::cerr << "trial " << (trial + 1) << "/" << total << " n=" << n << "\n";
    };
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random covers of a base graph: Hashimoto spectra, tangles, trace experiments"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int threads = default_threads();
    std::string out_dir;
    bool progress = false;
    app.add_option("--seed", seed, "master seed (global)")->capture_default_str();
    app.add_option("--threads", threads, "worker cap; results do not depend on it")
        ->capture_default_str();
    app.add_option("--out", out_dir, "output directory for CSV/JSON results");
    app.add_flag("--progress", progress, "stream per-trial progress to stderr");

    // sample
    auto* cmd_sample = app.add_subcommand("sample", "draw one cover and dump sigma");
    std::string sample_model = "perm", sample_base = "bouquet:2,0";
    int sample_n = 8;
    cmd_sample->add_option("--model", sample_model,
                           "perm | perm-inv-even | perm-inv-odd | cycle | cycle-inv-even | "
                           "cycle-inv-odd");
    cmd_sample->add_option("--base", sample_base, "base graph spec");
    cmd_sample->add_option("--n", sample_n, "cover degree");

    // spectra
    auto* cmd_spectra = app.add_subcommand("spectra", "adjacency and Hashimoto spectra");
    std::string spectra_graph = "bouquet:2,0", spectra_model, spectra_eps = "0.1";
    int spectra_n = 0;
    cmd_spectra->add_option("--graph", spectra_graph, "graph spec");
    cmd_spectra->add_option("--model", spectra_model, "sample a cover of --graph from this model");
    cmd_spectra->add_option("--n", spectra_n, "cover degree (with --model)");
    cmd_spectra->add_option("--eps", spectra_eps, "epsilon list for non-Alon counts");

    // ihara-check
    auto* cmd_ihara = app.add_subcommand("ihara-check", "verify the determinantal identity");
    std::string ihara_graph;
    int ihara_random = 0, ihara_maxv = 8;
    cmd_ihara->add_option("--graph", ihara_graph, "single graph spec");
    cmd_ihara->add_option("--random", ihara_random, "number of random graphs");
    cmd_ihara->add_option("--max-vertices", ihara_maxv, "random graph size cap");

    // walks-census
    auto* cmd_census = app.add_subcommand("walks-census", "SNBC census by homotopy type");
    std::string census_graph = "theta:1,2,2";
    int census_k = 6;
    cmd_census->add_option("--graph", census_graph, "graph spec");
    cmd_census->add_option("--k", census_k, "walk length");

    // tangles
    auto* cmd_tangles = app.add_subcommand("tangles", "enumerate minimal tangles");
    double tangles_nu = 2.0;
    int tangles_r = 2, tangles_bound = 8;
    cmd_tangles->add_option("--nu", tangles_nu, "mu1 threshold (weak inequality)");
    cmd_tangles->add_option("--r", tangles_r, "order bound (strict)");
    cmd_tangles->add_option("--bound", tangles_bound, "edge bound, <= 14");

    // certificates
    auto* cmd_certs = app.add_subcommand("certificates", "minimal VLG length certificates");
    std::string certs_type = "figure8";
    double certs_nu = 2.0;
    int certs_bound = 10;
    cmd_certs->add_option("--type", certs_type, "figure8 | theta | barbell | cycle | graph spec");
    cmd_certs->add_option("--nu", certs_nu, "mu1 threshold");
    cmd_certs->add_option("--bound", certs_bound, "box bound per coordinate, <= 12");

    // trace-mc
    auto* cmd_trace = app.add_subcommand("trace-mc", "Monte-Carlo E[Trace(H^k)]");
    std::string trace_model = "perm", trace_base = "bouquet:2,0", trace_n = "100";
    int trace_kmax = 6, trace_trials = 100;
    cmd_trace->add_option("--model", trace_model, "model name");
    cmd_trace->add_option("--base", trace_base, "base graph spec");
    cmd_trace->add_option("--n", trace_n, "degree grid, comma separated");
    cmd_trace->add_option("--k", trace_kmax, "max walk length");
    cmd_trace->add_option("--trials", trace_trials, "trials per degree");

    // expansion-fit
    auto* cmd_fit = app.add_subcommand("expansion-fit", "fit 1/n expansion coefficients");
    std::string fit_model = "perm", fit_base = "bouquet:2,0", fit_n = "50,100,200,400";
    std::string fit_stat = "trace";
    int fit_kmax = 6, fit_trials = 200, fit_order = 2, fit_m = 0, fit_r = 2;
    double fit_nu = 2.0;
    cmd_fit->add_option("--model", fit_model, "model name");
    cmd_fit->add_option("--base", fit_base, "base graph spec");
    cmd_fit->add_option("--n", fit_n, "degree grid (needs >= order+2 points)");
    cmd_fit->add_option("--k", fit_kmax, "max walk length");
    cmd_fit->add_option("--trials", fit_trials, "trials per degree");
    cmd_fit->add_option("--order", fit_order, "expansion order r");
    cmd_fit->add_option("--stat", fit_stat, "trace | certified | snbc-order");
    cmd_fit->add_option("--order-m", fit_m, "walk order for snbc-order");
    cmd_fit->add_option("--nu", fit_nu, "nu for certified traces");
    cmd_fit->add_option("--r", fit_r, "r for certified traces");

    // nonalon
    auto* cmd_nonalon = app.add_subcommand("nonalon", "non-Alon probability scaling");
    std::string na_model = "perm", na_base = "bouquet:2,0", na_n = "100,200,400", na_eps = "0.1";
    int na_trials = 1000;
    cmd_nonalon->add_option("--model", na_model, "model name");
    cmd_nonalon->add_option("--base", na_base, "base graph spec (regular)");
    cmd_nonalon->add_option("--n", na_n, "degree grid");
    cmd_nonalon->add_option("--eps", na_eps, "epsilon list");
    cmd_nonalon->add_option("--trials", na_trials, "trials per degree");

    // sidestep-demo
    auto* cmd_side = app.add_subcommand("sidestep-demo", "planted eigenvalue localization demo");
    std::string side_n = "64,128,256", side_loc = "4:1";
    int side_j = 1, side_trials = 20000;
    double side_theta = 0.25, side_lambda0 = 3.0, side_eps = 0.2;
    cmd_side->add_option("--n", side_n, "matrix size grid");
    cmd_side->add_option("--j", side_j, "planted order");
    cmd_side->add_option("--theta", side_theta, "disc radius exponent");
    cmd_side->add_option("--lambda0", side_lambda0, "bulk radius");
    cmd_side->add_option("--eps", side_eps, "bulk margin for Eout");
    cmd_side->add_option("--locations", side_loc, "planted l:C pairs, comma separated");
    cmd_side->add_option("--trials", side_trials, "trials per n");

    // inspect
    auto* cmd_inspect = app.add_subcommand("inspect", "human-readable reports");
    std::string inspect_subject, inspect_graph = "theta:1,2,2", inspect_type = "figure8";
    int inspect_k = 6, inspect_bound = 8;
    double inspect_nu = 2.0;
    int inspect_r = 2;
    cmd_inspect->add_option("subject", inspect_subject, "walks | tangles | certificates")
        ->required();
    cmd_inspect->add_option("--graph", inspect_graph, "graph spec (walks)");
    cmd_inspect->add_option("--k", inspect_k, "walk length (walks)");
    cmd_inspect->add_option("--nu", inspect_nu, "threshold (tangles, certificates)");
    cmd_inspect->add_option("--r", inspect_r, "order bound (tangles)");
    cmd_inspect->add_option("--bound", inspect_bound, "edge/box bound");
    cmd_inspect->add_option("--type", inspect_type, "homotopy type (certificates)");

    // global flags may appear after the subcommand name
    for (CLI::App* sc : app.get_subcommands(static_cast<const std::function<bool(CLI::App*)>&>(nullptr)))
        sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    OutputSink sink;
    sink.dir = out_dir;
    sink.manifest["version"] = kVersion;
    sink.manifest["seed"] = seed;
    sink.manifest["threads"] = threads;
    {
        Json args = Json::array();
        for (int i = 0; i < argc; ++i) args.push_back(argv[i]);
        sink.manifest["argv"] = args;
    }

    try {
        if (*cmd_sample) {
            sink.manifest["command"] = "sample";
            Graph base = parse_graph_spec(sample_base);
            auto cover = sample_cover({model_from_name(sample_model), base}, sample_n, seed);
            sink.stage("base.graph", graph_to_text(base));
            sink.stage("cover.sigma", cover_to_text(cover, "base.graph"));
            std::cout << "sampled degree-" << sample_n << " cover of " << sample_base << " ("
                      << cover.total.vertex_count() << " vertices, "
                      << cover.total.dir_edge_count() << " directed edges)\n";
            if (out_dir.empty()) std::cout << cover_to_text(cover, sample_base);
        } else if (*cmd_spectra) {
            sink.manifest["command"] = "spectra";
            Graph g = parse_graph_spec(spectra_graph);
            std::vector<double> epsilons = parse_double_list(spectra_eps);
            if (!spectra_model.empty()) {
                if (spectra_n < 1) throw ParseError("--n required with --model");
                auto cover = sample_cover({model_from_name(spectra_model), g}, spectra_n, seed);
                SpectrumReport rep = new_old_spectrum(cover);
                std::cout << "Spec(A_G) = " << join_spectrum(rep.adjacency_all) << "\n";
                std::cout << "old       = " << join_spectrum(rep.adjacency_old) << "\n";
                std::cout << "new       = " << join_spectrum(rep.adjacency_new) << "\n";
                std::cout << "mu1 = " << format_number(rep.mu1_value)
                          << "  new spectral radius = "
                          << format_number(rep.new_spectral_radius) << "\n";
                sink.stage("spectrum.json", spectrum_report_json(rep, epsilons).dump(2) + "\n");
            } else {
                std::cout << "Spec(A) = " << join_spectrum(adjacency_eigenvalues(g)) << "\n";
                std::cout << "Spec(H) = " << join_complex(hashimoto_eigenvalues(g)) << "\n";
                std::cout << "mu1 = " << format_number(mu1(g)) << "\n";
                SpectrumReport rep;
                rep.adjacency_all = adjacency_eigenvalues(g);
                rep.hashimoto_all = hashimoto_eigenvalues(g);
                rep.mu1_value = mu1(g);
                sink.stage("spectrum.json", spectrum_report_json(rep).dump(2) + "\n");
            }
        } else if (*cmd_ihara) {
            sink.manifest["command"] = "ihara-check";
            if (ihara_random > 0) {
                Rng rng(seed);
                int held = 0;
                double worst = 0.0;
                for (int i = 0; i < ihara_random; ++i) {
                    Graph g = random_graph(rng, ihara_maxv, 12);
                    IharaResult res = ihara_check(g);
                    if (res.holds) ++held;
                    worst = std::max(worst, res.max_abs_residual);
                }
                std::cout << held << "/" << ihara_random << " hold (max relative residual "
                          << format_number(worst) << ")\n";
                if (held != ihara_random) return 1;
            } else {
                Graph g = parse_graph_spec(ihara_graph);
                IharaResult res = ihara_check(g);
                std::cout << (res.holds ? "holds" : ("fails: " + res.details)) << "\n";
                if (!res.holds) return 1;
            }
        } else if (*cmd_census) {
            sink.manifest["command"] = "walks-census";
            Graph g = parse_graph_spec(census_graph);
            auto rows = walk_census(g, census_k);
            std::string csv = csv_census(rows);
            std::cout << csv;
            sink.stage("census.csv", csv);
        } else if (*cmd_tangles) {
            sink.manifest["command"] = "tangles";
            TangleCatalog cat =
                enumerate_minimal_tangles({tangles_nu, tangles_r}, tangles_bound);
            std::cout << "minimal (>=" << format_number(tangles_nu) << ",<" << tangles_r
                      << ")-tangles up to " << tangles_bound
                      << " edges: " << cat.tangles.size() << "\n";
            for (size_t i = 0; i < cat.tangles.size(); ++i) {
                const Graph& t = cat.tangles[i];
                std::cout << "  #" << i << ": " << t.vertex_count() << " vertices, "
                          << t.edge_count() << " edges, ord " << order(t) << ", mu1 "
                          << format_number(cat.mu1_values[i]) << ", shape "
                          << classify_shape(t) << "\n";
            }
            if (!out_dir.empty()) save_catalog(cat, out_dir + "/catalog");
        } else if (*cmd_certs) {
            sink.manifest["command"] = "certificates";
            Graph t;
            if (certs_type == "figure8")
                t = Graph::bouquet(2, 0);
            else if (certs_type == "theta")
                t = Graph::theta(1, 1, 1);
            else if (certs_type == "barbell")
                t = graph_from_text(
                    "graph 2\nedge 0 0 0\nedge 1 0 0\nedge 2 0 1\nedge 3 1 0\nedge 4 1 1\n"
                    "edge 5 1 1\ninv 0 1\ninv 2 3\ninv 4 5\n");
            else if (certs_type == "cycle")
                t = Graph::bouquet(1, 0);
            else
                t = parse_graph_spec(certs_type);
            auto certs = certificates(t, certs_nu, certs_bound);
            std::cout << certs.size() << " minimal certificates for mu1 < "
                      << format_number(certs_nu) << " within box " << certs_bound << ":\n";
            for (const Certificate& c : certs) {
                std::cout << "  (";
                for (size_t i = 0; i < c.xi.size(); ++i)
                    std::cout << (i ? "," : "") << c.xi[i];
                std::cout << ")  mu1(VLG) = " << format_number(mu1(vlg(c.t, c.xi))) << "\n";
            }
            sink.stage("certificates.json",
                       certificates_json(certs_type, certs_nu, certs_bound, certs).dump(2) +
                           "\n");
        } else if (*cmd_trace) {
            sink.manifest["command"] = "trace-mc";
            ExperimentPlan plan;
            plan.model = {model_from_name(trace_model), parse_graph_spec(trace_base)};
            plan.n_grid = parse_int_list(trace_n);
            plan.k_max = trace_kmax;
            plan.trials = trace_trials;
            plan.master_seed = seed;
            if (4 * plan.k_max > plan.n_grid.front())
                std::cerr << "warning: k > n/4; the truncated-expansion regime assumes short walks\n";
            McTraceTable table = mc_expected_trace(plan, threads, progress_printer(progress));
            std::string csv = csv_mc_table(table);
            std::cout << csv;
            sink.stage("trace_mc.csv", csv);
        } else if (*cmd_fit) {
            sink.manifest["command"] = "expansion-fit";
            ExperimentPlan plan;
            plan.model = {model_from_name(fit_model), parse_graph_spec(fit_base)};
            plan.n_grid = parse_int_list(fit_n);
            plan.k_max = fit_kmax;
            plan.trials = fit_trials;
            plan.master_seed = seed;
            plan.nu = fit_nu;
            plan.r = fit_r;
            TraceStatistic stat = TraceStatistic::trace;
            if (fit_stat == "certified")
                stat = TraceStatistic::certified;
            else if (fit_stat == "snbc-order")
                stat = TraceStatistic::snbc_order;
            else if (fit_stat != "trace")
                throw ParseError("unknown statistic " + fit_stat);
            ExpansionEstimate est =
                fit_expansion(plan, stat, fit_order, fit_m, threads, progress_printer(progress));
            std::string csv = "k";
            for (int j = 0; j < est.order; ++j)
                csv += ",c" + std::to_string(j) + ",sd" + std::to_string(j);
            csv += "\n";
            for (int ki = 0; ki <= est.k_max - est.k_min; ++ki) {
                csv += std::to_string(est.k_min + ki);
                for (int j = 0; j < est.order; ++j) {
                    csv += "," + format_number(est.coefficients[ki][j]);
                    csv +=
                        "," + format_number(std::sqrt(std::max(0.0, est.covariance[ki](j, j))));
                }
                csv += "\n";
            }
            std::cout << csv;
            sink.stage("expansion_fit.csv", csv);
        } else if (*cmd_nonalon) {
            sink.manifest["command"] = "nonalon";
            NonAlonScaling res = mc_nonalon_probability(
                {model_from_name(na_model), parse_graph_spec(na_base)}, parse_int_list(na_n),
                parse_double_list(na_eps), na_trials, seed, threads,
                progress_printer(progress));
            std::string csv = csv_nonalon(res);
            std::cout << csv;
            for (size_t e = 0; e < res.epsilons.size(); ++e)
                std::cout << "slope(eps=" << format_number(res.epsilons[e])
                          << ") = " << format_number(res.slope[e]) << "\n";
            sink.stage("nonalon.csv", csv);
        } else if (*cmd_side) {
            sink.manifest["command"] = "sidestep-demo";
            std::vector<std::pair<double, double>> bases;
            std::vector<double> locations;
            {
                std::stringstream ss(side_loc);
                std::string part;
                while (std::getline(ss, part, ',')) {
                    auto colon = part.find(':');
                    if (colon == std::string::npos)
                        throw ParseError("locations need l:C pairs");
                    double l = std::stod(part.substr(0, colon));
                    double c = std::stod(part.substr(colon + 1));
                    bases.push_back({l, c});
                    locations.push_back(l);
                }
            }
            MatrixModel model =
                planted_model(side_lambda0, side_j, bases, parse_int_list(side_n));
            SidestepDemoReport rep = sidestep_demo(model, side_j, side_theta, side_eps,
                                                   side_trials, seed, locations, threads);
            std::string csv = csv_sidestep(rep);
            std::cout << csv;
            for (size_t li = 0; li < rep.locations.size(); ++li)
                std::cout << "slope@" << format_number(rep.locations[li]) << " = "
                          << format_number(rep.slopes[li]) << " (target " << -side_j << ")\n";
            std::cout << (rep.slopes_within_half ? "slopes within +-0.5 of target\n"
                                                 : "slopes OUTSIDE +-0.5 of target\n");
            sink.stage("sidestep.csv", csv);
        } else if (*cmd_inspect) {
            sink.manifest["command"] = "inspect";
            if (inspect_subject == "walks") {
                Graph g = parse_graph_spec(inspect_graph);
                auto rows = walk_census(g, inspect_k);
                std::cout << "SNBC census, k = " << inspect_k << ":\n";
                std::cout << "  order  lengths       count  type\n";
                for (const CensusRow& row : rows) {
                    std::string lengths;
                    for (size_t i = 0; i < row.lengths.size(); ++i)
                        lengths += (i ? "," : "") + std::to_string(row.lengths[i]);
                    std::cout << "  " << row.order << "      (" << lengths << ")";
                    for (size_t pad = lengths.size(); pad < 10; ++pad) std::cout << ' ';
                    std::cout << row.count << "      " << row.type_key << "\n";
                }
            } else if (inspect_subject == "tangles") {
                TangleCatalog cat =
                    enumerate_minimal_tangles({inspect_nu, inspect_r}, inspect_bound);
                std::cout << "minimal tangles (nu=" << format_number(inspect_nu)
                          << ", r=" << inspect_r << ", bound=" << inspect_bound << "):\n";
                for (size_t i = 0; i < cat.tangles.size(); ++i)
                    std::cout << "  " << classify_shape(cat.tangles[i])
                              << "  mu1=" << format_number(cat.mu1_values[i])
                              << "  ord=" << order(cat.tangles[i]) << "\n";
            } else if (inspect_subject == "certificates") {
                Graph t = inspect_type == "figure8" ? Graph::bouquet(2, 0)
                          : inspect_type == "theta" ? Graph::theta(1, 1, 1)
                                                    : parse_graph_spec(inspect_type);
                auto certs = certificates(t, inspect_nu, inspect_bound);
                std::cout << "minimal xi with mu1(VLG) < " << format_number(inspect_nu)
                          << ":\n";
                for (const Certificate& c : certs) {
                    std::cout << "  (";
                    for (size_t i = 0; i < c.xi.size(); ++i)
                        std::cout << (i ? "," : "") << c.xi[i];
                    std::cout << ")\n";
                }
            } else {
                throw ParseError("unknown inspect subject: " + inspect_subject);
            }
        }
        sink.flush();
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const BoundTooLarge& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

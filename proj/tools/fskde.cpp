// fskde: command-line front end for the FS-KDE library.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical
// precondition failure. Errors print one machine-parsable line to stderr.

#include "fskde/bench.hpp"
#include "fskde/canonical.hpp"
#include "fskde/descriptor.hpp"
#include "fskde/image.hpp"
#include "fskde/io.hpp"
#include "fskde/kernel.hpp"
#include "fskde/rng.hpp"
#include "fskde/stability.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace {

constexpr const char* kVersion = "0.1.0";

using fskde::format_double;

// writes either to a file or to stdout when path is empty or "-"
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw fskde::IoError("cannot create output file: " + path);
            out_ = &file_;
        } else {
            out_ = &std::cout;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_ = nullptr;
};

fskde::KernelMode parse_mode(const std::string& mode, int order) {
    if (mode == "exact") return fskde::KernelMode::Exact;
    if (mode == "approx") return fskde::KernelMode::NormalApprox;
    if (mode == "auto") {
        return 2 * order >= 80 ? fskde::KernelMode::NormalApprox
                               : fskde::KernelMode::Exact;
    }
    throw CLI::ValidationError("--mode", "expected exact|approx|auto");
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) {
        throw CLI::ValidationError("--sigmas", "expected comma-separated numbers");
    }
    return out;
}

int cmd_kernel(int order, const std::string& mode, int grid,
               const std::string& csv_path, const std::string& json_path) {
    const fskde::Kernel kernel = fskde::Kernel::make(order, parse_mode(mode, order));

    std::string csv;
    csv += "theta,h\n";
    for (int i = 0; i < grid; ++i) {
        const double theta = -fskde::kPi + fskde::kTwoPi * i / grid;
        csv += format_double(theta);
        csv += ",";
        csv += format_double(kernel.eval(theta));
        csv += "\n";
    }

    nlohmann::ordered_json j;
    j["K"] = kernel.order();
    auto& h = j["H"] = nlohmann::json::array();
    for (double v : kernel.coeffs()) h.push_back(v);

    if (!csv_path.empty()) {
        OutputTarget t(csv_path);
        t.stream() << csv;
    } else {
        std::cout << csv;
    }
    if (!json_path.empty()) {
        OutputTarget t(json_path);
        t.stream() << j.dump() << "\n";
    } else {
        std::cout << j.dump() << "\n";
    }
    return 0;
}

fskde::AngleWeightSet read_angles_from(const std::string& path, bool degrees) {
    if (path.empty() || path == "-") {
        return fskde::read_angle_csv(std::cin, degrees);
    }
    std::ifstream f(path);
    if (!f) throw fskde::IoError("cannot open angle CSV: " + path);
    return fskde::read_angle_csv(f, degrees);
}

int cmd_estimate(int order, const std::string& mode, const std::string& input,
                 bool degrees, std::optional<double> epsilon,
                 const std::string& canon, int canon_level,
                 const std::string& output) {
    const fskde::Kernel kernel = fskde::Kernel::make(order, parse_mode(mode, order));
    const fskde::AngleWeightSet set = read_angles_from(input, degrees);

    fskde::Descriptor d = fskde::estimate(set, kernel);
    if (epsilon) d = fskde::truncate(d, fskde::truncation_mask(order, *epsilon));
    if (canon == "f1") {
        d = fskde::canonicalize_f1(d).base;
    } else if (canon == "fk") {
        const int level = canon_level > 0 ? canon_level : d.order();
        d = fskde::canonicalize_fk(d, level).base;
    } else if (canon != "none") {
        throw CLI::ValidationError("--canon", "expected none|f1|fk");
    }

    OutputTarget t(output);
    t.stream() << fskde::descriptor_to_json(d) << "\n";
    return 0;
}

int cmd_evaluate(const std::string& descriptor_path, double theta) {
    std::string text;
    if (descriptor_path.empty() || descriptor_path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream f(descriptor_path);
        if (!f) throw fskde::IoError("cannot open descriptor: " + descriptor_path);
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    const fskde::Descriptor d = fskde::descriptor_from_json(text);
    std::cout << format_double(fskde::evaluate(d, theta)) << "\n";
    return 0;
}

int cmd_describe_image(const std::string& input, int order,
                       const std::string& mode, const std::string& window,
                       int window_size, double window_sigma,
                       const std::string& gradient, const std::string& prefix) {
    const fskde::Image img = fskde::read_image(input);
    const fskde::Kernel kernel = fskde::Kernel::make(order, parse_mode(mode, order));
    const auto grad_op = gradient == "sobel" ? fskde::GradientOperator::Sobel
                                             : fskde::GradientOperator::CentralDiff;

    fskde::Window win = [&] {
        if (window == "box") return fskde::Window::box(window_size);
        if (window == "gauss") {
            if (window_size % 2 == 0) {
                throw CLI::ValidationError("--window-size",
                                           "gaussian window size must be odd");
            }
            const double sigma =
                window_sigma > 0.0 ? window_sigma : window_size / 4.0;
            return fskde::Window::truncated_gaussian((window_size - 1) / 2, sigma);
        }
        throw CLI::ValidationError("--window", "expected box|gauss");
    }();

    const fskde::AngularImage grad = fskde::gradient_field(img, grad_op);
    const fskde::DescriptorField field = fskde::local_fskde(grad, win, kernel);
    fskde::export_field(field, prefix);
    return 0;
}

int cmd_match(const std::string& manifest, const std::string& method_name,
              int size_param, bool rotate, std::uint64_t seed, double epsilon,
              int mask_diameter, const std::string& dump_path,
              const std::string& output) {
    const fskde::PatchDataset ds = fskde::load_dataset(manifest);
    fskde::BenchOptions options;
    options.rotate = rotate;
    options.seed = seed;
    options.epsilon = epsilon;
    options.mask_diameter = mask_diameter;
    options.dump_distances = !dump_path.empty();

    const fskde::BenchReport report = fskde::run_benchmark(
        ds, fskde::parse_method(method_name), size_param, options);

    OutputTarget t(output);
    t.stream() << "method,size_param,auc,n_pos,n_neg\n"
               << report.method << "," << report.size_param << ","
               << format_double(report.auc) << "," << report.n_pos << ","
               << report.n_neg << "\n";

    if (!dump_path.empty()) {
        OutputTarget dt(dump_path);
        dt.stream() << "pair_index,id_a,id_b,label,distance\n";
        for (std::size_t p = 0; p < report.pair_distances.size(); ++p) {
            const auto& pr = ds.pairs[p];
            dt.stream() << p << "," << ds.ids[pr.a] << "," << ds.ids[pr.b] << ","
                        << (pr.corresponding ? 1 : 0) << ","
                        << format_double(report.pair_distances[p]) << "\n";
        }
    }
    return 0;
}

fskde::AngleWeightSet make_base_set(const std::string& base, std::size_t n,
                                    std::uint64_t seed) {
    if (n < 2) throw CLI::ValidationError("--n", "need at least 2 samples");
    std::vector<double> angles(n), weights(n);
    if (base == "random") {
        fskde::Rng rng(fskde::Rng::derive(seed, 0x0b5eu));
        for (std::size_t i = 0; i < n; ++i) {
            angles[i] = rng.uniform(-0.9, 0.9);
            weights[i] = rng.uniform(0.5, 1.5);
        }
    } else if (base == "symmetric") {
        for (std::size_t i = 0; i < n; ++i) {
            angles[i] = (i % 2 == 0) ? 0.0 : fskde::kPi;
            weights[i] = 1.0;
        }
    } else {
        throw CLI::ValidationError("--base", "expected random|symmetric");
    }
    return fskde::AngleWeightSet::make(std::move(angles), std::move(weights));
}

int cmd_simulate(int order, std::size_t n, const std::string& sigmas_csv,
                 int trials, std::uint64_t seed, const std::string& base,
                 const std::string& output, const std::string& summary_path,
                 const std::string& curve_path) {
    const fskde::Kernel kernel = fskde::Kernel::make(order);
    const fskde::AngleWeightSet base_set = make_base_set(base, n, seed);
    const std::vector<double> sigmas = parse_double_list(sigmas_csv);

    const fskde::SimulationReport report =
        fskde::simulate_stability(base_set, kernel, sigmas, trials, seed);

    {
        OutputTarget t(output);
        t.stream() << "sigma,trial,noise_dist,canon_dist,bound_sample\n";
        for (const auto& rec : report.trials) {
            t.stream() << format_double(rec.sigma) << "," << rec.trial << ","
                       << format_double(rec.noise_dist) << ","
                       << format_double(rec.canon_dist) << ","
                       << format_double(rec.bound) << "\n";
        }
    }

    nlohmann::ordered_json j;
    j["order"] = report.order;
    j["n"] = report.n;
    j["seed"] = report.seed;
    j["f1_mag"] = report.f1_mag;
    auto& arr = j["sigmas"] = nlohmann::json::array();
    for (const auto& s : report.summaries) {
        nlohmann::ordered_json e;
        e["sigma"] = s.sigma;
        e["mean_noise"] = s.mean_noise;
        e["se_noise"] = s.se_noise;
        e["mean_canon"] = s.mean_canon;
        e["se_canon"] = s.se_canon;
        e["mean_bound"] = s.mean_bound;
        e["se_bound"] = s.se_bound;
        e["mean_bound_quadrant"] = s.mean_bound_quadrant;
        e["se_bound_quadrant"] = s.se_bound_quadrant;
        arr.push_back(e);
    }
    {
        OutputTarget t(summary_path);
        t.stream() << j.dump() << "\n";
    }

    if (!curve_path.empty()) {
        OutputTarget t(curve_path);
        t.stream() << "phi,rot_dist\n";
        for (const auto& p : report.rotation_curve) {
            t.stream() << format_double(p.phi) << "," << format_double(p.dist)
                       << "\n";
        }
    }
    return 0;
}

int cmd_gen_synthetic(const std::string& out_dir, int pairs, std::uint64_t seed,
                      int patch_size) {
    fskde::SyntheticOptions options;
    options.n_pairs = pairs;
    options.seed = seed;
    options.patch_size = patch_size;
    const std::string manifest = fskde::generate_synthetic_dataset(out_dir, options);
    std::cout << manifest << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier-series kernel density estimation of angular distributions"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // kernel
    auto* sc_kernel = app.add_subcommand("kernel", "print kernel samples and coefficients");
    int k_order = 4;
    std::string k_mode = "auto";
    int k_grid = 256;
    std::string k_csv, k_json;
    sc_kernel->add_option("--order", k_order, "kernel order K")->required();
    sc_kernel->add_option("--mode", k_mode, "exact|approx|auto (default auto)");
    sc_kernel->add_option("--grid", k_grid, "number of sample points")
        ->check(CLI::PositiveNumber);
    sc_kernel->add_option("--csv", k_csv, "write samples CSV here instead of stdout");
    sc_kernel->add_option("--json", k_json, "write coefficient JSON here instead of stdout");

    // estimate
    auto* sc_est = app.add_subcommand("estimate", "estimate a descriptor from an angle CSV");
    int e_order = 16;
    std::string e_mode = "auto", e_input, e_canon = "none", e_output;
    bool e_degrees = false;
    double e_epsilon = -1.0;
    int e_canon_level = 0;
    sc_est->add_option("--order", e_order, "descriptor order K")->required();
    sc_est->add_option("--input", e_input, "CSV file with 'theta,weight' header ('-' = stdin)");
    sc_est->add_flag("--degrees", e_degrees, "angles are in degrees");
    sc_est->add_option("--mode", e_mode, "exact|approx|auto");
    sc_est->add_option("--epsilon", e_epsilon, "apply truncation at this threshold");
    sc_est->add_option("--canon", e_canon, "none|f1|fk");
    sc_est->add_option("--canon-level", e_canon_level, "level for --canon fk (default K)");
    sc_est->add_option("--output", e_output, "output path (default stdout)");

    // evaluate
    auto* sc_eval = app.add_subcommand("evaluate", "evaluate a descriptor JSON at an angle");
    std::string v_desc;
    double v_theta = 0.0;
    sc_eval->add_option("--descriptor", v_desc, "descriptor JSON path ('-' = stdin)");
    sc_eval->add_option("--theta", v_theta, "angle in radians")->required();

    // describe-image
    auto* sc_img = app.add_subcommand("describe-image", "per-pixel descriptor field of an image");
    std::string i_input, i_mode = "auto", i_window = "box", i_prefix = "field";
    std::string i_gradient = "central";
    int i_order = 8, i_window_size = 5;
    double i_sigma = -1.0;
    sc_img->add_option("--input", i_input, "PGM/PNG image")->required();
    sc_img->add_option("--order", i_order, "kernel order K")->required();
    sc_img->add_option("--mode", i_mode, "exact|approx|auto");
    sc_img->add_option("--window", i_window, "box|gauss");
    sc_img->add_option("--window-size", i_window_size, "window side length")
        ->check(CLI::PositiveNumber);
    sc_img->add_option("--window-sigma", i_sigma, "gaussian sigma (default size/4)");
    sc_img->add_option("--gradient", i_gradient, "central|sobel")
        ->check(CLI::IsMember({"central", "sobel"}));
    sc_img->add_option("--output-prefix", i_prefix, "prefix for plane files and manifest");

    // match
    auto* sc_match = app.add_subcommand("match", "run the patch-matching benchmark");
    std::string m_manifest, m_method = "fskde", m_dump, m_output;
    int m_size = 20, m_mask = 60;
    bool m_rotate = false;
    std::uint64_t m_seed = 0;
    double m_epsilon = 1e-5;
    sc_match->add_option("--manifest", m_manifest, "dataset manifest JSON")->required();
    sc_match->add_option("--method", m_method,
                         "intensity|hist|hist_canon|fskde|fskde_f1|fskde_fk")
        ->check(CLI::IsMember({"intensity", "hist", "hist_canon", "fskde",
                               "fskde_f1", "fskde_fk"}));
    sc_match->add_option("--size", m_size, "descriptor budget in real numbers");
    sc_match->add_flag("--rotate", m_rotate, "randomly rotate every patch first");
    sc_match->add_option("--seed", m_seed, "seed for --rotate");
    sc_match->add_option("--epsilon", m_epsilon, "FS-KDE truncation threshold");
    sc_match->add_option("--mask-diameter", m_mask, "circular crop diameter in pixels");
    sc_match->add_option("--dump-distances", m_dump, "write per-pair distances CSV here");
    sc_match->add_option("--output", m_output, "report CSV path (default stdout)");

    // simulate
    auto* sc_sim = app.add_subcommand("simulate", "Monte-Carlo canonicalization stability run");
    int s_order = 4, s_trials = 1000;
    std::size_t s_n = 16;
    std::string s_sigmas = "0.1", s_base = "random", s_output, s_summary, s_curve;
    std::uint64_t s_seed = 1;
    sc_sim->add_option("--order", s_order, "kernel order K")->required();
    sc_sim->add_option("--n", s_n, "sample count N")->required();
    sc_sim->add_option("--sigmas", s_sigmas, "comma-separated noise scales")->required();
    sc_sim->add_option("--trials", s_trials, "trials per sigma")->check(CLI::PositiveNumber);
    sc_sim->add_option("--seed", s_seed, "RNG seed");
    sc_sim->add_option("--base", s_base, "random|symmetric");
    sc_sim->add_option("--output", s_output, "trial CSV path (default stdout)");
    sc_sim->add_option("--summary", s_summary, "summary JSON path (default stdout)");
    sc_sim->add_option("--curve", s_curve, "rotation-distance curve CSV path");

    // gen-synthetic
    auto* sc_gen = app.add_subcommand("gen-synthetic", "write a synthetic patch dataset");
    std::string g_out;
    int g_pairs = 2000, g_patch = 64;
    std::uint64_t g_seed = 1;
    sc_gen->add_option("--out", g_out, "output directory")->required();
    sc_gen->add_option("--pairs", g_pairs, "corresponding pairs to generate")
        ->check(CLI::PositiveNumber);
    sc_gen->add_option("--seed", g_seed, "RNG seed");
    sc_gen->add_option("--patch-size", g_patch, "patch side length");

    try {
        app.parse(argc, argv);

        if (*sc_kernel) return cmd_kernel(k_order, k_mode, k_grid, k_csv, k_json);
        if (*sc_est) {
            std::optional<double> eps;
            if (e_epsilon > 0.0) eps = e_epsilon;
            return cmd_estimate(e_order, e_mode, e_input, e_degrees, eps, e_canon,
                                e_canon_level, e_output);
        }
        if (*sc_eval) return cmd_evaluate(v_desc, v_theta);
        if (*sc_img) {
            return cmd_describe_image(i_input, i_order, i_mode, i_window,
                                      i_window_size, i_sigma, i_gradient, i_prefix);
        }
        if (*sc_match) {
            return cmd_match(m_manifest, m_method, m_size, m_rotate, m_seed,
                             m_epsilon, m_mask, m_dump, m_output);
        }
        if (*sc_sim) {
            return cmd_simulate(s_order, s_n, s_sigmas, s_trials, s_seed, s_base,
                                s_output, s_summary, s_curve);
        }
        if (*sc_gen) return cmd_gen_synthetic(g_out, g_pairs, g_seed, g_patch);
        std::cerr << "error: usage: no subcommand given\n";
        return 1;
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 1;
    } catch (const fskde::IoError& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 2;
    }
}

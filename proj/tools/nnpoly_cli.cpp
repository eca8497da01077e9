#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nnpoly/nnpoly.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

bool json_errors = false;

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

int report(const std::string& kind, const std::string& message, int code) {
  if (json_errors) {
    std::cerr << "{\"error\":\"" << json_escape(kind) << "\",\"message\":\"" << json_escape(message)
              << "\",\"exit_code\":" << code << "}\n";
  } else {
    std::cerr << "nnpoly-cli: " << kind << ": " << message << "\n";
  }
  return code;
}

struct Failure {
  nnp_status status;
};

// Throws on failure so command bodies read straight through; handles are
// held by RAII wrappers below.
void check(nnp_status status) {
  if (status != NNP_OK) throw Failure{status};
}

int exit_code_for(nnp_status status) {
  switch (status) {
    case NNP_ERR_INVALID_ARGUMENT:
    case NNP_ERR_DIMENSION:
    case NNP_ERR_PARSE:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Poly = Handle<nnp_poly, nnp_poly_free>;
using Weights = Handle<nnp_weights, nnp_weights_free>;
using Data = Handle<nnp_dataset, nnp_dataset_free>;
using Scaling = Handle<nnp_scaling, nnp_scaling_free>;

nnp_activation activation(const std::string& name) {
  nnp_activation act{};
  check(nnp_activation_from_name(name.c_str(), &act));
  return act;
}

nnp_scaling_mode scaling_mode(const std::string& name) {
  nnp_scaling_mode mode{};
  check(nnp_scaling_mode_from_name(name.c_str(), &mode));
  return mode;
}

std::string decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convert single-hidden-layer networks into polynomials and run the simulation study"};
  app.set_version_flag("--version", std::string(nnp_version()));
  app.add_flag("--json-errors", json_errors, "Print errors as one JSON object on stderr");
  app.require_subcommand(1);

  std::vector<std::function<void()>> actions;
  auto bind = [&](CLI::App* sub, std::function<void()> fn) { sub->callback([&actions, fn] { actions.push_back(fn); }); };

  // generate
  {
    auto* sub = app.add_subcommand("generate", "Draw a random polynomial dataset");
    static nnp_datagen_config cfg;
    nnp_datagen_config_default(&cfg);
    static std::string out, generator_out;
    sub->add_option("--seed", cfg.seed, "Random seed")->required();
    sub->add_option("--out", out, "Dataset CSV to write")->required();
    sub->add_option("--generator-out", generator_out, "Write the generating polynomial as JSON");
    sub->add_option("--n", cfg.n, "Number of samples")->capture_default_str();
    sub->add_option("--p", cfg.p, "Number of features")->capture_default_str();
    sub->add_option("--degree", cfg.degree, "Degree of the generating polynomial")->capture_default_str();
    sub->add_option("--noise-sd", cfg.noise_sd, "Gaussian noise standard deviation")->capture_default_str();
    bind(sub, [] {
      Data data;
      Poly gen;
      check(nnp_generate_data(&cfg, data.out(), gen.out()));
      check(nnp_dataset_save(data.get(), out.c_str()));
      if (!generator_out.empty()) check(nnp_poly_save(gen.get(), generator_out.c_str()));
    });
  }

  // train
  {
    auto* sub = app.add_subcommand("train", "Train a network with iRPROP+");
    static nnp_train_config cfg;
    nnp_train_config_default(&cfg);
    static std::string data_path, out, act = "softplus", scale = "none", scaling_out;
    static int hidden = 4;
    sub->add_option("--data", data_path, "Training data CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Weights JSON to write")->required();
    sub->add_option("--seed", cfg.seed, "Initialization seed")->required();
    sub->add_option("--hidden", hidden, "Hidden units")->capture_default_str();
    sub->add_option("--activation", act, "softplus, tanh, sigmoid or linear")->capture_default_str();
    sub->add_option("--scale", scale, "Scale data before training: none, unit or symmetric")->capture_default_str();
    sub->add_option("--scaling-out", scaling_out, "Write the fitted scaling as JSON");
    sub->add_option("--max-epochs", cfg.max_epochs, "Epoch limit")->capture_default_str();
    bind(sub, [] {
      const auto mode = scaling_mode(scale);
      if (mode != NNP_SCALE_NONE && scaling_out.empty()) {
        throw CLI::ValidationError("--scaling-out", "required when --scale is not 'none'");
      }
      Data raw;
      check(nnp_dataset_load(data_path.c_str(), raw.out()));
      Scaling spec;
      Data scaled;
      check(nnp_scaling_fit(raw.get(), mode, spec.out()));
      check(nnp_scaling_apply(spec.get(), raw.get(), scaled.out()));
      Weights w;
      nnp_train_summary summary{};
      check(nnp_train(scaled.get(), hidden, activation(act), &cfg, w.out(), &summary));
      check(nnp_weights_save(w.get(), out.c_str()));
      if (!scaling_out.empty()) check(nnp_scaling_save(spec.get(), scaling_out.c_str()));
      std::cout << "epochs " << summary.epochs << "\nconverged " << (summary.converged ? "true" : "false")
                << "\ntrain_mse " << decimal(summary.final_mse) << "\n";
    });
  }

  // transcode
  {
    auto* sub = app.add_subcommand("transcode", "Convert network weights into a polynomial");
    static std::string weights, out, scaling;
    static int order = 3;
    sub->add_option("--weights", weights, "Weights JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--order", order, "Taylor order q")->required();
    sub->add_option("--out", out, "Polynomial JSON to write")->required();
    sub->add_option("--scaling", scaling, "Express the polynomial in original units")->check(CLI::ExistingFile);
    bind(sub, [] {
      Weights w;
      check(nnp_weights_load(weights.c_str(), w.out()));
      Poly poly;
      check(nnp_transcode(w.get(), order, poly.out()));
      if (scaling.empty()) {
        check(nnp_poly_save(poly.get(), out.c_str()));
        return;
      }
      Scaling spec;
      check(nnp_scaling_load(scaling.c_str(), spec.out()));
      Poly original;
      check(nnp_rescale_to_original(poly.get(), spec.get(), original.out()));
      check(nnp_poly_save(original.get(), out.c_str()));
    });
  }

  // diagnose-range
  {
    auto* sub = app.add_subcommand("diagnose-range", "Interval where the Taylor series stays within epsilon");
    static std::string act;
    static int order = 3;
    static double epsilon = 0.1;
    sub->add_option("--activation", act, "Activation name")->required();
    sub->add_option("--order", order, "Taylor order q")->required();
    sub->add_option("--epsilon", epsilon, "Absolute error bound")->capture_default_str();
    bind(sub, [] {
      double lo = 0.0, hi = 0.0;
      int saturated = 0;
      check(nnp_valid_range(activation(act), order, epsilon, &lo, &hi, &saturated));
      std::cout << "lo " << decimal(lo) << "\nhi " << decimal(hi) << "\n";
      if (saturated) std::cout << "saturated true\n";
    });
  }

  // coverage
  {
    auto* sub = app.add_subcommand("coverage", "Fraction of synaptic potentials inside the Taylor range");
    static std::string weights, data_path, scaling;
    static int order = 3;
    static double epsilon = 0.1;
    sub->add_option("--weights", weights, "Weights JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--data", data_path, "Data CSV in original units")->required()->check(CLI::ExistingFile);
    sub->add_option("--order", order, "Taylor order q")->required();
    sub->add_option("--epsilon", epsilon, "Absolute error bound")->capture_default_str();
    sub->add_option("--scaling", scaling, "Scaling applied before computing potentials")->check(CLI::ExistingFile);
    bind(sub, [] {
      Weights w;
      check(nnp_weights_load(weights.c_str(), w.out()));
      Data data;
      check(nnp_dataset_load(data_path.c_str(), data.out()));
      Data scaled;
      const nnp_dataset* used = data.get();
      if (!scaling.empty()) {
        Scaling spec;
        check(nnp_scaling_load(scaling.c_str(), spec.out()));
        check(nnp_scaling_apply(spec.get(), data.get(), scaled.out()));
        used = scaled.get();
      }
      int hidden = 0;
      check(nnp_weights_dims(w.get(), nullptr, &hidden, nullptr));
      std::vector<double> per_unit(static_cast<std::size_t>(hidden));
      double overall = 0.0;
      check(nnp_coverage(w.get(), used, order, epsilon, &overall, per_unit.data(), per_unit.size()));
      std::cout << "overall " << decimal(overall) << "\n";
      for (std::size_t j = 0; j < per_unit.size(); ++j) std::cout << "unit" << j + 1 << " " << decimal(per_unit[j]) << "\n";
    });
  }

  // fit-ols
  {
    auto* sub = app.add_subcommand("fit-ols", "Least-squares polynomial baseline");
    static std::string data_path, out;
    static int degree = 2;
    sub->add_option("--data", data_path, "Data CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--degree", degree, "Polynomial degree")->required();
    sub->add_option("--out", out, "Polynomial JSON to write")->required();
    bind(sub, [] {
      Data data;
      check(nnp_dataset_load(data_path.c_str(), data.out()));
      Poly poly;
      nnp_fit_report rep{};
      check(nnp_fit_ols(data.get(), degree, poly.out(), &rep));
      check(nnp_poly_save(poly.get(), out.c_str()));
      std::cout << "rss " << decimal(rep.residual_sum_squares) << "\ncondition_number "
                << decimal(rep.condition_number) << "\n";
    });
  }

  // compare-coeffs
  {
    auto* sub = app.add_subcommand("compare-coeffs", "Coefficient differences between two polynomials");
    static std::string a, b, table;
    sub->add_option("a", a, "First polynomial JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("b", b, "Second polynomial JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--table", table, "Write a per-monomial CSV");
    bind(sub, [] {
      Poly pa, pb;
      check(nnp_poly_load(a.c_str(), pa.out()));
      check(nnp_poly_load(b.c_str(), pb.out()));
      double max_abs = 0.0, l2 = 0.0;
      check(nnp_poly_compare(pa.get(), pb.get(), &max_abs, &l2, table.empty() ? nullptr : table.c_str()));
      std::cout << "max_abs " << decimal(max_abs) << "\nl2 " << decimal(l2) << "\n";
    });
  }

  // simulate
  {
    auto* sub = app.add_subcommand("simulate", "Run the repetition grid and write records and summary tables");
    static std::string config, out;
    static int reps = 0, threads = 0;
    static std::uint64_t seed = 0;
    sub->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory")->required();
    sub->add_option("--seed", seed, "Base seed")->required();
    sub->add_option("--reps", reps, "Repetitions per cell (default: config)");
    sub->add_option("--threads", threads, "Worker threads (default: config)");
    bind(sub, [] { check(nnp_simulate(config.c_str(), reps, seed, threads, out.c_str())); });
  }

  // surfaces
  {
    auto* sub = app.add_subcommand("surfaces", "Fixed-data coefficient study with surface grids");
    static std::string config, out;
    static std::uint64_t seed = 0;
    sub->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory")->required();
    sub->add_option("--seed", seed, "Study seed")->required();
    bind(sub, [] { check(nnp_surfaces(config.c_str(), seed, out.c_str())); });
  }

  if (argc <= 1) {
    std::cerr << app.help();
    return kExitValidation;
  }

  try {
    app.parse(argc, argv);
    for (auto& action : actions) action();
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report("usage", e.what(), kExitValidation);
  } catch (const Failure& f) {
    return report(nnp_status_name(f.status), nnp_last_error(), exit_code_for(f.status));
  }
  return kExitOk;
}

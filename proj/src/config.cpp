#include "nnpoly/config.hpp"

#include <charconv>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "nnpoly/error.hpp"
#include "nnpoly/file_formats.hpp"

namespace nnpoly {

namespace {

struct Scalar {
  std::variant<double, long long, bool, std::string> value;
};

struct Value {
  bool is_array = false;
  std::vector<Scalar> items;  // one item for scalars
  std::size_t line = 0;
};

class Parser {
 public:
  Parser(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  std::map<std::string, Value> parse() {
    std::map<std::string, Value> out;
    std::string section;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      auto end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = strip(strip_comment(text_.substr(pos, end - pos)));
      ++line_;
      pos = end + 1;
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail("unterminated section header");
        section = std::string(strip(line.substr(1, line.size() - 2)));
        if (section.empty()) fail("empty section name");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) fail("expected 'key = value'");
      const std::string key(strip(line.substr(0, eq)));
      if (key.empty()) fail("missing key");
      const std::string full = section.empty() ? key : section + "." + key;
      if (out.count(full)) fail("duplicate key '" + full + "'");
      Value v = value(strip(line.substr(eq + 1)));
      v.line = line_;
      out.emplace(full, std::move(v));
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("config '" + std::string(source_) + "' line " + std::to_string(line_) + ": " + msg);
  }

 private:
  static std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  }

  static std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') in_string = !in_string;
      if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
  }

  Value value(std::string_view s) {
    if (s.empty()) fail("missing value");
    Value v;
    if (s.front() == '[') {
      if (s.back() != ']') fail("arrays must close on the same line");
      v.is_array = true;
      std::string_view body = strip(s.substr(1, s.size() - 2));
      while (!body.empty()) {
        std::size_t cut = 0;
        bool in_string = false;
        while (cut < body.size() && (in_string || body[cut] != ',')) {
          if (body[cut] == '"') in_string = !in_string;
          ++cut;
        }
        v.items.push_back(scalar(strip(body.substr(0, cut))));
        body = cut < body.size() ? strip(body.substr(cut + 1)) : std::string_view{};
      }
      return v;
    }
    v.items.push_back(scalar(s));
    return v;
  }

  Scalar scalar(std::string_view s) {
    if (s.empty()) fail("empty array element");
    if (s.front() == '"') {
      if (s.size() < 2 || s.back() != '"') fail("unterminated string");
      return {std::string(s.substr(1, s.size() - 2))};
    }
    if (s == "true") return {true};
    if (s == "false") return {false};
    const bool looks_real = s.find_first_of(".eE") != std::string_view::npos || s == "inf" || s == "nan";
    if (!looks_real) {
      long long i = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
      if (ec == std::errc() && ptr == s.data() + s.size()) return {i};
    }
    double d = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("cannot parse value '" + std::string(s) + "'");
    return {d};
  }

  std::string_view text_;
  std::string_view source_;
  std::size_t line_ = 0;
};

class Binder {
 public:
  Binder(std::map<std::string, Value> values, std::string_view source)
      : values_(std::move(values)), source_(source) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    auto it = values_.find(key);
    const std::string where = it == values_.end() ? "" : " line " + std::to_string(it->second.line);
    throw ParseError("config '" + std::string(source_) + "'" + where + ": key '" + key + "' " + msg);
  }

  const Value* take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return nullptr;
    used_.push_back(key);
    return &it->second;
  }

  double real(const std::string& key, const Scalar& s) const {
    if (auto d = std::get_if<double>(&s.value)) return *d;
    if (auto i = std::get_if<long long>(&s.value)) return static_cast<double>(*i);
    fail(key, "must be a number");
  }

  long long integer(const std::string& key, const Scalar& s) const {
    if (auto i = std::get_if<long long>(&s.value)) return *i;
    fail(key, "must be an integer");
  }

  std::string text(const std::string& key, const Scalar& s) const {
    if (auto t = std::get_if<std::string>(&s.value)) return *t;
    fail(key, "must be a string");
  }

  const Scalar& single(const std::string& key, const Value& v) const {
    if (v.is_array) fail(key, "must be a single value, not an array");
    return v.items.front();
  }

  void set(const std::string& key, double& out) {
    if (auto v = take(key)) out = real(key, single(key, *v));
  }

  void set(const std::string& key, int& out) {
    if (auto v = take(key)) out = static_cast<int>(integer(key, single(key, *v)));
  }

  void set(const std::string& key, bool& out) {
    if (auto v = take(key)) {
      const auto& s = single(key, *v);
      if (auto b = std::get_if<bool>(&s.value)) {
        out = *b;
      } else {
        fail(key, "must be true or false");
      }
    }
  }

  void set_range(const std::string& key, double& lo, double& hi) {
    if (auto v = take(key)) {
      if (!v->is_array || v->items.size() != 2) fail(key, "must be a two-element array [lo, hi]");
      lo = real(key, v->items[0]);
      hi = real(key, v->items[1]);
    }
  }

  template <typename T, typename Convert>
  void set_list(const std::string& key, std::vector<T>& out, Convert convert) {
    if (auto v = take(key)) {
      out.clear();
      for (const auto& item : v->items) {
        try {
          out.push_back(convert(item));
        } catch (const ValidationError& e) {
          fail(key, e.what());
        }
      }
      if (out.empty()) fail(key, "must not be empty");
    }
  }

  template <typename T, typename Convert>
  void set_enum(const std::string& key, T& out, Convert convert) {
    if (auto v = take(key)) {
      try {
        out = convert(text(key, single(key, *v)));
      } catch (const ValidationError& e) {
        fail(key, e.what());
      }
    }
  }

  void reject_unknown() const {
    for (const auto& [key, v] : values_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) fail(key, "is not a recognised setting");
    }
  }

 private:
  std::map<std::string, Value> values_;
  std::vector<std::string> used_;
  std::string_view source_;
};

}  // namespace

SimulationConfig default_simulation_config() {
  SimulationConfig cfg;
  cfg.study.base = cfg.grid.base;
  cfg.study.base.data.p = 2;
  cfg.study.base.activation = Activation::softplus;
  cfg.study.base.scaling = ScalingMode::symmetric;
  cfg.study.base.hidden = 4;
  cfg.study.base.order = 2;
  return cfg;
}

SimulationConfig parse_simulation_config(std::string_view text, std::string_view source) {
  Parser parser(text, source);
  Binder b(parser.parse(), source);
  SimulationConfig cfg = default_simulation_config();
  ExperimentConfig& base = cfg.grid.base;

  b.set("data.n", base.data.n);
  b.set("data.p", base.data.p);
  b.set("data.degree", base.data.degree);
  b.set_range("data.mean_range", base.data.mean_lo, base.data.mean_hi);
  b.set("data.variance", base.data.variance);
  b.set_range("data.coeff_range", base.data.coeff_lo, base.data.coeff_hi);
  b.set("data.noise_sd", base.data.noise_sd);

  b.set("experiment.train_fraction", base.train_fraction);
  b.set("experiment.epsilon", base.epsilon);

  TrainConfig& t = base.train;
  b.set("training.max_epochs", t.max_epochs);
  b.set("training.gradient_tolerance", t.gradient_tolerance);
  b.set("training.initial_step", t.initial_step);
  b.set("training.increase", t.increase);
  b.set("training.decrease", t.decrease);
  b.set("training.min_step", t.min_step);
  b.set("training.max_step", t.max_step);
  b.set("training.init_scale", t.init_scale);

  b.set_list("grid.activations", cfg.grid.activations,
             [&](const Scalar& s) { return activation_from_string(b.text("grid.activations", s)); });
  b.set_list("grid.scalings", cfg.grid.scalings,
             [&](const Scalar& s) { return scaling_mode_from_string(b.text("grid.scalings", s)); });
  b.set_list("grid.hidden", cfg.grid.hidden,
             [&](const Scalar& s) { return static_cast<int>(b.integer("grid.hidden", s)); });
  b.set_list("grid.orders", cfg.grid.orders,
             [&](const Scalar& s) { return static_cast<int>(b.integer("grid.orders", s)); });
  b.set("grid.reps", cfg.grid.reps);
  b.set("grid.fixed_data", cfg.grid.fixed_data);
  b.set("grid.threads", cfg.grid.threads);

  // The coefficient study inherits data, split, epsilon and training
  // settings, then applies its own overrides.
  const int study_p = cfg.study.base.data.p;
  const auto study_base = cfg.study.base;
  cfg.study.base = base;
  cfg.study.base.data.p = study_p;
  cfg.study.base.activation = study_base.activation;
  cfg.study.base.scaling = study_base.scaling;
  cfg.study.base.hidden = study_base.hidden;
  cfg.study.base.order = study_base.order;
  ExperimentConfig& s = cfg.study.base;
  b.set("surfaces.p", s.data.p);
  b.set_enum("surfaces.activation", s.activation, activation_from_string);
  b.set_enum("surfaces.scaling", s.scaling, scaling_mode_from_string);
  b.set("surfaces.hidden", s.hidden);
  b.set("surfaces.order", s.order);
  b.set("surfaces.networks", cfg.study.networks);
  b.set("surfaces.resolution", cfg.study.resolution);
  b.set("surfaces.extend", cfg.study.extend);

  b.reject_unknown();
  try {
    cfg.grid.validate();
    cfg.study.validate();
  } catch (const ValidationError& e) {
    throw ParseError("config '" + std::string(source) + "': " + e.what());
  }
  return cfg;
}

SimulationConfig load_simulation_config(const std::filesystem::path& path) {
  return parse_simulation_config(read_text_file(path), path.string());
}

}  // namespace nnpoly

#include "nnpoly/file_formats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nnpoly/error.hpp"

namespace nnpoly {

using nlohmann::json;

std::string format_real(double v) {
  if (!std::isfinite(v)) throw ValidationError("cannot serialize non-finite value");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

namespace {

std::string real_list(const double* data, std::size_t n) {
  std::string s = "[";
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ", ";
    s += format_real(data[i]);
  }
  return s + "]";
}

// Parsing helpers that name the offending field.
class Reader {
 public:
  Reader(std::string_view text, std::string_view source, std::string_view kind)
      : source_(source), kind_(kind) {
    try {
      doc_ = json::parse(text);
    } catch (const json::parse_error& e) {
      // The parse_error text carries line and column.
      throw ParseError(std::string(kind) + " file '" + source_ + "': " + e.what());
    }
    if (!doc_.is_object()) fail("top level must be an object");
    const int version = integer(doc_, "format");
    if (version != kFileFormatVersion) {
      fail("unsupported format version " + std::to_string(version));
    }
    if (doc_.contains("kind") && string(doc_, "kind") != kind_) {
      fail("kind is '" + string(doc_, "kind") + "', expected '" + kind_ + "'");
    }
  }

  const json& doc() const { return doc_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(kind_ + " file '" + source_ + "': " + msg);
  }

  const json& field(const json& obj, const char* name) const {
    auto it = obj.find(name);
    if (it == obj.end()) fail(std::string("missing field '") + name + "'");
    return *it;
  }

  int integer(const json& obj, const char* name) const {
    const json& f = field(obj, name);
    if (!f.is_number_integer()) fail(std::string("field '") + name + "' must be an integer");
    return f.get<int>();
  }

  double real(const json& v, const std::string& where) const {
    if (!v.is_number()) fail(where + " must be a number");
    return v.get<double>();
  }

  double real(const json& obj, const char* name) const { return real(field(obj, name), std::string("field '") + name + "'"); }

  std::string string(const json& obj, const char* name) const {
    const json& f = field(obj, name);
    if (!f.is_string()) fail(std::string("field '") + name + "' must be a string");
    return f.get<std::string>();
  }

  std::vector<double> reals(const json& arr, const std::string& where) const {
    if (!arr.is_array()) fail(where + " must be an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(real(arr[i], where + "[" + std::to_string(i) + "]"));
    return out;
  }

 private:
  json doc_;
  std::string source_;
  std::string kind_;
};

}  // namespace

std::string polynomial_to_json(const Polynomial& poly) {
  std::string s = "{\n  \"format\": 1,\n  \"kind\": \"polynomial\",\n";
  s += "  \"p\": " + std::to_string(poly.variables()) + ",\n";
  s += "  \"degree\": " + std::to_string(poly.degree()) + ",\n";
  s += "  \"terms\": [";
  bool first = true;
  for (const auto& [m, c] : poly.terms()) {
    s += first ? "\n" : ",\n";
    first = false;
    s += "    {\"exponents\": [";
    for (int i = 0; i < m.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(m[i]);
    }
    s += "], \"coeff\": " + format_real(c) + "}";
  }
  s += first ? "]\n}\n" : "\n  ]\n}\n";
  return s;
}

Polynomial polynomial_from_json(std::string_view text, std::string_view source) {
  Reader r(text, source, "polynomial");
  const int p = r.integer(r.doc(), "p");
  const int degree = r.integer(r.doc(), "degree");
  if (p < 1) r.fail("field 'p' must be >= 1");
  if (degree < 0) r.fail("field 'degree' must be >= 0");
  const json& terms = r.field(r.doc(), "terms");
  if (!terms.is_array()) r.fail("field 'terms' must be an array");
  Polynomial poly(p, degree);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string where = "terms[" + std::to_string(t) + "]";
    const json& term = terms[t];
    if (!term.is_object()) r.fail(where + " must be an object");
    if (!term.contains("exponents")) r.fail(where + ": missing field 'exponents'");
    if (!term.contains("coeff")) r.fail(where + ": missing field 'coeff'");
    const json& e = term["exponents"];
    if (!e.is_array() || static_cast<int>(e.size()) != p) {
      r.fail(where + ".exponents must be an array of " + std::to_string(p) + " integers");
    }
    std::vector<int> exps;
    for (const auto& v : e) {
      if (!v.is_number_integer() || v.get<int>() < 0) r.fail(where + ".exponents must be non-negative integers");
      exps.push_back(v.get<int>());
    }
    MultiIndex m(std::move(exps));
    if (m.degree() > degree) r.fail(where + " exceeds the degree bound");
    if (poly.terms().count(m)) r.fail(where + " duplicates an earlier monomial");
    poly.set(m, r.real(term["coeff"], where + ".coeff"));
  }
  return poly;
}

void save_polynomial(const Polynomial& poly, const std::filesystem::path& path) {
  write_text_file(path, polynomial_to_json(poly));
}

Polynomial load_polynomial(const std::filesystem::path& path) {
  return polynomial_from_json(read_text_file(path), path.string());
}

std::string weights_to_json(const NetworkWeights& net) {
  net.validate();
  std::string s = "{\n  \"format\": 1,\n  \"kind\": \"network\",\n";
  s += "  \"p\": " + std::to_string(net.inputs()) + ",\n";
  s += "  \"h1\": " + std::to_string(net.hidden()) + ",\n";
  s += "  \"activation\": \"" + std::string(to_string(net.activation)) + "\",\n";
  s += "  \"w\": [";
  for (Eigen::Index i = 0; i < net.w.rows(); ++i) {
    std::vector<double> row(net.w.row(i).begin(), net.w.row(i).end());
    s += i ? ",\n    " : "\n    ";
    s += real_list(row.data(), row.size());
  }
  s += "\n  ],\n";
  s += "  \"v\": " + real_list(net.v.data(), static_cast<std::size_t>(net.v.size())) + "\n}\n";
  return s;
}

NetworkWeights weights_from_json(std::string_view text, std::string_view source) {
  Reader r(text, source, "network");
  const int p = r.integer(r.doc(), "p");
  const int h1 = r.integer(r.doc(), "h1");
  if (p < 1) r.fail("field 'p' must be >= 1");
  if (h1 < 1) r.fail("field 'h1' must be >= 1");
  NetworkWeights net;
  try {
    net.activation = activation_from_string(r.string(r.doc(), "activation"));
  } catch (const ValidationError& e) {
    r.fail(std::string("field 'activation': ") + e.what());
  }
  const json& w = r.field(r.doc(), "w");
  if (!w.is_array() || static_cast<int>(w.size()) != p + 1) {
    r.fail("field 'w' must hold p + 1 = " + std::to_string(p + 1) + " rows");
  }
  net.w.resize(p + 1, h1);
  for (int i = 0; i <= p; ++i) {
    const auto row = r.reals(w[static_cast<std::size_t>(i)], "w[" + std::to_string(i) + "]");
    if (static_cast<int>(row.size()) != h1) {
      r.fail("w[" + std::to_string(i) + "] must hold h1 = " + std::to_string(h1) + " values");
    }
    for (int j = 0; j < h1; ++j) net.w(i, j) = row[static_cast<std::size_t>(j)];
  }
  const auto v = r.reals(r.field(r.doc(), "v"), "field 'v'");
  if (static_cast<int>(v.size()) != h1 + 1) {
    r.fail("field 'v' must hold h1 + 1 = " + std::to_string(h1 + 1) + " values");
  }
  net.v = Eigen::Map<const Eigen::VectorXd>(v.data(), h1 + 1);
  return net;
}

void save_weights(const NetworkWeights& net, const std::filesystem::path& path) {
  write_text_file(path, weights_to_json(net));
}

NetworkWeights load_weights(const std::filesystem::path& path) {
  return weights_from_json(read_text_file(path), path.string());
}

std::string scaling_to_json(const ScalingSpec& spec) {
  std::string s = "{\n  \"format\": 1,\n  \"kind\": \"scaling\",\n";
  s += "  \"mode\": \"" + std::string(to_string(spec.mode)) + "\",\n";
  s += "  \"feature_min\": " + real_list(spec.feature_min.data(), spec.feature_min.size()) + ",\n";
  s += "  \"feature_max\": " + real_list(spec.feature_max.data(), spec.feature_max.size()) + ",\n";
  s += "  \"response_min\": " + format_real(spec.response_min) + ",\n";
  s += "  \"response_max\": " + format_real(spec.response_max) + "\n}\n";
  return s;
}

ScalingSpec scaling_from_json(std::string_view text, std::string_view source) {
  Reader r(text, source, "scaling");
  ScalingSpec spec;
  try {
    spec.mode = scaling_mode_from_string(r.string(r.doc(), "mode"));
  } catch (const ValidationError& e) {
    r.fail(std::string("field 'mode': ") + e.what());
  }
  spec.feature_min = r.reals(r.field(r.doc(), "feature_min"), "field 'feature_min'");
  spec.feature_max = r.reals(r.field(r.doc(), "feature_max"), "field 'feature_max'");
  spec.response_min = r.real(r.doc(), "response_min");
  spec.response_max = r.real(r.doc(), "response_max");
  try {
    spec.validate();
  } catch (const std::exception& e) {
    r.fail(e.what());
  }
  return spec;
}

void save_scaling(const ScalingSpec& spec, const std::filesystem::path& path) {
  write_text_file(path, scaling_to_json(spec));
}

ScalingSpec load_scaling(const std::filesystem::path& path) {
  return scaling_from_json(read_text_file(path), path.string());
}

std::string dataset_to_csv(const Dataset& data) {
  std::string s;
  for (int i = 0; i < data.features(); ++i) s += "x" + std::to_string(i + 1) + ",";
  s += "y\n";
  for (int k = 0; k < data.samples(); ++k) {
    for (int i = 0; i < data.features(); ++i) s += format_real(data.x(k, i)) + ",";
    s += format_real(data.y(k)) + "\n";
  }
  return s;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    out.push_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Dataset dataset_from_csv(std::string_view text, std::string_view source) {
  auto fail = [&](std::size_t line, const std::string& msg) -> void {
    throw ParseError("dataset '" + std::string(source) + "' line " + std::to_string(line) + ": " + msg);
  };
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (line_no == 1) {
      columns = fields.size();
      if (columns < 2) fail(line_no, "header needs at least one feature column and y");
      if (fields.back() != "y") fail(line_no, "last header column must be 'y'");
      continue;
    }
    if (fields.size() != columns) {
      fail(line_no, "expected " + std::to_string(columns) + " fields, found " + std::to_string(fields.size()));
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      const auto* first = fields[c].data();
      const auto* last = first + fields[c].size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        fail(line_no, "column " + std::to_string(c + 1) + ": '" + std::string(fields[c]) + "' is not a finite number");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (columns == 0) throw ParseError("dataset '" + std::string(source) + "': empty file");
  Dataset d;
  d.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns - 1));
  d.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t c = 0; c + 1 < columns; ++c) {
      d.x(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = rows[k][c];
    }
    d.y(static_cast<Eigen::Index>(k)) = rows[k].back();
  }
  return d;
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  write_text_file(path, dataset_to_csv(data));
}

Dataset load_dataset(const std::filesystem::path& path) {
  return dataset_from_csv(read_text_file(path), path.string());
}

}  // namespace nnpoly

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bergman/kernel_model.hpp"

namespace bergman {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Complex vectors as flat [re, im, re, im, ...] lists.

inline CVec parse_cvec(const std::vector<double>& v, const std::string& what) {
  if (v.empty() || v.size() % 2 != 0)
    throw UsageError(what + ": expected a non-empty list of real,imag pairs");
  return to_complex(Eigen::Map<const RVec>(v.data(), static_cast<Eigen::Index>(v.size())));
}

/// "0.5,0,0.1,-0.2" -> (0.5+0i, 0.1-0.2i).
inline CVec parse_cvec(const std::string& s, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError(what + ": cannot parse '" + tok + "' as a number");
    }
  }
  return parse_cvec(v, what);
}

inline json cvec_to_json(const CVec& z) {
  json a = json::array();
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    a.push_back(z[j].real());
    a.push_back(z[j].imag());
  }
  return a;
}

// ---------------------------------------------------------------------------
// Domain files.
//
//   {"kind": "polydisc", "center": [re, im, ...], "radii": [...]}
//   {"kind": "ball", "center": [...], "radius": r}
//   {"kind": "ellipsoid", "exponents": [m1, ..., mn]}
//   {"kind": "general", "rho": "<built-in>", "dimension": n, "params": [...]}
// Any kind may carry "bbox": [[lo, hi], ...] with 2n real intervals.

inline DomainSpec domain_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    std::optional<Box> bbox;
    if (j.contains("bbox")) {
      const auto& b = j.at("bbox");
      Box box{RVec(static_cast<Eigen::Index>(b.size())), RVec(static_cast<Eigen::Index>(b.size()))};
      for (std::size_t k = 0; k < b.size(); ++k) {
        box.lo[static_cast<Eigen::Index>(k)] = b.at(k).at(0).get<double>();
        box.hi[static_cast<Eigen::Index>(k)] = b.at(k).at(1).get<double>();
      }
      bbox = box;
    }
    auto finish = [&](DomainSpec d) {
      if (j.contains("dimension") && j.at("dimension").get<int>() != d.dimension())
        throw UsageError("domain: 'dimension' disagrees with the other fields");
      return bbox ? d.with_bbox(*bbox) : d;
    };
    if (kind == "polydisc") {
      const CVec c = parse_cvec(j.at("center").get<std::vector<double>>(), "domain.center");
      const auto r = j.at("radii").get<std::vector<double>>();
      return finish(DomainSpec::polydisc(c, Eigen::Map<const RVec>(r.data(), static_cast<Eigen::Index>(r.size()))));
    }
    if (kind == "ball")
      return finish(DomainSpec::ball(parse_cvec(j.at("center").get<std::vector<double>>(), "domain.center"),
                                     j.at("radius").get<double>()));
    if (kind == "ellipsoid") return finish(DomainSpec::ellipsoid(j.at("exponents").get<std::vector<int>>()));
    if (kind == "general") {
      const std::vector<double> params = j.value("params", std::vector<double>{});
      return finish(make_builtin(j.at("rho").get<std::string>(), params, j.at("dimension").get<int>()));
    }
    throw UsageError("domain: unknown kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw UsageError(std::string("domain: malformed JSON: ") + e.what());
  }
}

inline json domain_to_json(const DomainSpec& d) {
  json j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Polydisc>) {
          j["kind"] = "polydisc";
          j["center"] = cvec_to_json(v.center);
          j["radii"] = std::vector<double>(v.radii.data(), v.radii.data() + v.radii.size());
        } else if constexpr (std::is_same_v<T, Ball>) {
          j["kind"] = "ball";
          j["center"] = cvec_to_json(v.center);
          j["radius"] = v.radius;
        } else if constexpr (std::is_same_v<T, ComplexEllipsoid>) {
          j["kind"] = "ellipsoid";
          j["exponents"] = v.exponents;
        } else {
          if (v.name == "intersection" || v.name.empty())
            throw UsageError("domain_to_json: '" + v.name + "' is not a named built-in");
          j["kind"] = "general";
          j["rho"] = v.name;
          j["params"] = v.params;
        }
      },
      d.variant());
  j["dimension"] = d.dimension();
  if (d.bbox_override()) {
    json b = json::array();
    for (Eigen::Index k = 0; k < d.bbox_override()->lo.size(); ++k)
      b.push_back({d.bbox_override()->lo[k], d.bbox_override()->hi[k]});
    j["bbox"] = b;
  }
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("'" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

inline DomainSpec load_domain(const std::string& path) { return domain_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Model files. Doubles are written in shortest round-trip form, so a saved
// model reloads bit for bit.

inline json model_to_json(const KernelModel& m) {
  json j;
  j["format"] = "bergman-model/1";
  j["domain"] = domain_to_json(m.domain());
  j["degree"] = m.degree();
  j["basis_center"] = cvec_to_json(m.basis().center());
  j["basis_scale"] = m.basis().scale();
  j["rows"] = m.coeff().rows();
  j["cols"] = m.coeff().cols();
  std::vector<double> re, im;
  for (Eigen::Index r = 0; r < m.coeff().rows(); ++r)
    for (Eigen::Index c = 0; c < m.coeff().cols(); ++c) {
      re.push_back(m.coeff()(r, c).real());
      im.push_back(m.coeff()(r, c).imag());
    }
  j["coeff_re"] = re;
  j["coeff_im"] = im;
  j["cond_estimate"] = m.cond_estimate();
  j["dropped"] = m.dropped();
  j["norm_source"] = m.norm_source();
  j["drop_tol"] = m.drop_tol();
  return j;
}

inline KernelModel model_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "bergman-model/1") throw UsageError("model: unknown format");
    DomainSpec d = domain_from_json(j.at("domain"));
    const int degree = j.at("degree").get<int>();
    Basis basis(d.dimension(), degree, parse_cvec(j.at("basis_center").get<std::vector<double>>(), "basis_center"),
                j.at("basis_scale").get<double>());
    const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
    const auto re = j.at("coeff_re").get<std::vector<double>>();
    const auto im = j.at("coeff_im").get<std::vector<double>>();
    if (cols != basis.size() || re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size())
      throw UsageError("model: coefficient matrix has the wrong shape");
    CMat C(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) {
        const auto k = static_cast<std::size_t>(r * cols + c);
        C(r, c) = cplx(re[k], im[k]);
      }
    return KernelModel(std::move(d), std::move(basis), std::move(C), j.at("cond_estimate").get<double>(),
                       j.at("dropped").get<std::vector<int>>(), j.at("norm_source").get<std::string>(),
                       j.at("drop_tol").get<double>());
  } catch (const json::exception& e) {
    throw UsageError(std::string("model: malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Model cache keyed by (domain, degree, quadrature, seed, basis options).

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string model_cache_key(const DomainSpec& d, int degree, const std::string& quad_id,
                                   const BuildOptions& opt) {
  json k;
  k["domain"] = domain_to_json(d);
  k["degree"] = degree;
  k["quad"] = quad_id;
  k["basis_center"] = opt.basis_center ? cvec_to_json(*opt.basis_center) : json(nullptr);
  k["basis_scale"] = opt.basis_scale;
  k["drop_tol"] = opt.drop_tol;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(k.dump())));
  return buf;
}

class ModelCache {
 public:
  explicit ModelCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path path_for(const std::string& key) const { return dir_ / ("model-" + key + ".json"); }

  /// Loads the cached model for `key`, or builds, stores and returns it.
  KernelModel get_or_build(const std::string& key, const std::function<KernelModel()>& build, bool* hit = nullptr) {
    const auto p = path_for(key);
    if (std::filesystem::exists(p)) {
      if (hit) *hit = true;
      return model_from_json(read_json_file(p.string()));
    }
    if (hit) *hit = false;
    KernelModel m = build();
    std::filesystem::create_directories(dir_);
    write_text_file(p.string(), model_to_json(m).dump());
    return m;
  }

 private:
  std::filesystem::path dir_;
};

// ---------------------------------------------------------------------------
// CSV output with round-trip doubles.

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : cols_(header.size()) { line(header); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != cols_) throw UsageError("CsvWriter: row has the wrong number of cells");
    line(cells);
  }

  const std::string& str() const { return s_; }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s_ += ',';
      s_ += cells[i];
    }
    s_ += '\n';
  }
  std::size_t cols_;
  std::string s_;
};

}  // namespace bergman

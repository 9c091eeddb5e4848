#include "emergence/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace emergence::io {

namespace {

const Json& member(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return doc.at(key);
}

std::string text_of(const Json& doc, const char* key) {
  const Json& v = member(doc, key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw FormatError(std::string("field \"") + key + "\" must be a string");
}

Rational rational_of(const Json& doc, const char* key) {
  try {
    return parse_rational(text_of(doc, key));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("field \"") + key + "\": " + e.what());
  }
}

BigInt integer_of(const Json& doc, const char* key) {
  BigInt out;
  if (out.set_str(text_of(doc, key), 10) != 0) throw FormatError(std::string("field \"") + key + "\" is not an integer");
  return out;
}

template <class T>
T number_of(const Json& doc, const char* key) {
  const Json& v = member(doc, key);
  if (!v.is_number_integer()) throw FormatError(std::string("field \"") + key + "\" must be an integer");
  return v.get<T>();
}

Word word_of(const Json& v) {
  if (!v.is_string()) throw FormatError("words are digit strings");
  try {
    return word_from_string(v.get<std::string>());
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
}

std::vector<Atom> atoms_of(const Json& doc) {
  const Json& list = member(doc, "atoms");
  if (!list.is_array()) throw FormatError("\"atoms\" must be an array");
  std::vector<Atom> atoms;
  for (const auto& a : list) atoms.push_back({word_of(member(a, "word")), rational_of(a, "weight")});
  return atoms;
}

std::vector<Word> points_of(const Json& doc) {
  const Json& list = member(doc, "points");
  if (!list.is_array()) throw FormatError("\"points\" must be an array");
  std::vector<Word> points;
  for (const auto& p : list) points.push_back(word_of(p));
  return points;
}

Json fits_to_json(const std::vector<SlopeFit>& fits) {
  Json out = Json::array();
  for (const auto& f : fits) {
    Json j;
    j["epsilon"] = to_string(f.eps);
    j["lower_float"] = f.lower;
    j["upper_float"] = f.upper;
    if (f.exact_over_log_m) j["exact_over_log_m"] = to_string(*f.exact_over_log_m);
    out.push_back(std::move(j));
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

}  // namespace

Json to_json(const SymbolicSystem& system) {
  Json j;
  if (system.is_full_shift()) {
    j["type"] = "full_shift";
    j["alphabet"] = system.alphabet_size();
  } else {
    j["type"] = "subshift";
    Json rows = Json::array();
    for (const auto& row : system.transitions()) {
      Json r = Json::array();
      for (bool b : row) r.push_back(b ? 1 : 0);
      rows.push_back(std::move(r));
    }
    j["transitions"] = std::move(rows);
  }
  j["lambda"] = to_string(system.lambda());
  return j;
}

SystemHandle system_from_json(const Json& doc) {
  const std::string type = text_of(doc, "type");
  const Rational lambda = doc.contains("lambda") ? rational_of(doc, "lambda") : Rational(1, 2);
  try {
    if (type == "full_shift") return make_handle(SymbolicSystem::full_shift(number_of<int>(doc, "alphabet"), lambda));
    if (type == "subshift") {
      const Json& rows = member(doc, "transitions");
      if (!rows.is_array()) throw FormatError("\"transitions\" must be an array of rows");
      std::vector<std::vector<bool>> matrix;
      for (const auto& row : rows) {
        if (!row.is_array()) throw FormatError("transition rows must be arrays");
        std::vector<bool> r;
        for (const auto& v : row) {
          if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
            throw FormatError("transition entries must be 0 or 1");
          r.push_back(v.get<int>() == 1);
        }
        matrix.push_back(std::move(r));
      }
      return make_handle(SymbolicSystem::subshift(std::move(matrix), lambda));
    }
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("system: ") + e.what());
  }
  throw FormatError("unknown system type \"" + type + "\"");
}

Json to_json(const DiscreteMeasure& mu) {
  Json atoms = Json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"word", word_to_string(a.word)}, {"weight", to_string(a.weight)}});
  return Json{{"atoms", std::move(atoms)}};
}

DiscreteMeasure measure_from_json(const SystemHandle& system, const Json& doc) {
  return DiscreteMeasure(system, atoms_of(doc));
}

Json to_json(const FiniteClosedSet& set) {
  Json points = Json::array();
  for (const auto& p : set.points()) points.push_back(word_to_string(p));
  return Json{{"points", std::move(points)}};
}

FiniteClosedSet set_from_json(const SystemHandle& system, const Json& doc) {
  return FiniteClosedSet(system, points_of(doc));
}

Json to_json(const Certificate& cert) {
  Json j;
  j["kind"] = to_string(cert.kind);
  j["system"] = to_json(*cert.system);
  j["scale"] = {{"n", cert.n}, {"epsilon", to_string(cert.eps)}};
  j["family_size"] = to_string(cert.family_size);
  j["code_length"] = cert.code_length;
  if (cert.code_length > 0) {
    j["base_epsilon"] = to_string(cert.base_eps);
    Json base = Json::array();
    for (const auto& m : cert.base_measures) base.push_back(to_json(m));
    for (const auto& s : cert.base_sets) base.push_back(to_json(s));
    j["base"] = std::move(base);
  }
  Json witnesses = Json::array();
  for (std::size_t i = 0; i < cert.member_index.size(); ++i) {
    Json w;
    w["index"] = to_string(cert.member_index[i]);
    if (i < cert.measures.size()) w["measure"] = to_json(cert.measures[i]);
    if (i < cert.sets.size()) w["set"] = to_json(cert.sets[i]);
    witnesses.push_back(std::move(w));
  }
  j["witnesses"] = std::move(witnesses);
  const auto& v = cert.verification;
  Json pairs = Json::array();
  for (const auto& p : v.pairs)
    pairs.push_back({{"first", to_string(p.first)},
                     {"second", to_string(p.second)},
                     {"distance", to_string(p.distance)},
                     {"bound", to_string(p.bound)},
                     {"ok", p.ok}});
  j["verification"] = {{"sampled", v.sampled},
                       {"seed", v.seed},
                       {"pairs_checked", v.pairs_checked},
                       {"passed", v.passed},
                       {"pairs", std::move(pairs)}};
  return j;
}

LoadedCertificate certificate_from_json(const Json& doc) {
  LoadedCertificate out;
  Certificate& cert = out.cert;
  try {
    cert.kind = certificate_kind_from_string(text_of(doc, "kind"));
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
  cert.system = system_from_json(member(doc, "system"));
  const Json& scale = member(doc, "scale");
  cert.n = number_of<int>(scale, "n");
  cert.eps = rational_of(scale, "epsilon");
  cert.family_size = integer_of(doc, "family_size");
  cert.code_length = number_of<std::size_t>(doc, "code_length");
  const bool set_kind = cert.kind == CertificateKind::separated_sets || cert.kind == CertificateKind::split_sets;

  // Members that cannot be formed become defects; the slot keeps the index aligned.
  auto load_measure = [&](const Json& item, const std::string& label, std::vector<DiscreteMeasure>& into) {
    try {
      into.push_back(measure_from_json(cert.system, item));
      return true;
    } catch (const InvalidArgument& e) {
      out.defects.push_back(label + ": " + e.what());
      return false;
    }
  };
  auto load_set = [&](const Json& item, const std::string& label, std::vector<FiniteClosedSet>& into) {
    try {
      into.push_back(set_from_json(cert.system, item));
      return true;
    } catch (const InvalidArgument& e) {
      out.defects.push_back(label + ": " + e.what());
      return false;
    }
  };

  if (cert.code_length > 0) {
    cert.base_eps = rational_of(doc, "base_epsilon");
    const Json& base = member(doc, "base");
    if (!base.is_array()) throw FormatError("\"base\" must be an array");
    std::size_t k = 0;
    for (const auto& item : base) {
      const std::string label = "base member " + std::to_string(k++);
      if (set_kind) load_set(item, label, cert.base_sets);
      else load_measure(item, label, cert.base_measures);
    }
  }

  const Json& witnesses = member(doc, "witnesses");
  if (!witnesses.is_array()) throw FormatError("\"witnesses\" must be an array");
  for (const auto& w : witnesses) {
    BigInt index = integer_of(w, "index");
    const std::string label = "witness " + to_string(index);
    const bool ok = set_kind ? load_set(member(w, "set"), label, cert.sets)
                             : load_measure(member(w, "measure"), label, cert.measures);
    if (ok) cert.member_index.push_back(std::move(index));
  }

  const Json& v = member(doc, "verification");
  auto& rec = cert.verification;
  rec.sampled = member(v, "sampled").get<bool>();
  rec.seed = member(v, "seed").get<std::uint64_t>();
  rec.pairs_checked = number_of<std::size_t>(v, "pairs_checked");
  rec.passed = member(v, "passed").get<bool>();
  for (const auto& p : member(v, "pairs"))
    rec.pairs.push_back({integer_of(p, "first"), integer_of(p, "second"), rational_of(p, "distance"),
                         rational_of(p, "bound"), member(p, "ok").get<bool>()});
  return out;
}

Json to_json(const ScalingReport& report) {
  Json j;
  j["mode"] = to_string(report.mode);
  Json cells = Json::array();
  for (const auto& c : report.cells)
    cells.push_back({{"n", c.n},
                     {"epsilon", to_string(c.eps)},
                     {"lower", to_string(c.lower)},
                     {"upper", to_string(c.upper)},
                     {"exact", c.exact},
                     {"bound_ok", c.bound_ok},
                     {"witness", c.witness}});
  j["cells"] = std::move(cells);
  if (!report.single_log.empty()) j["single_log_slope"] = fits_to_json(report.single_log);
  if (!report.double_log.empty()) j["double_log_slope"] = fits_to_json(report.double_log);
  if (!report.ratios.empty()) j["ratios"] = fits_to_json(report.ratios);
  j["eps_trend"] = fits_to_json(report.eps_trend());
  j["notes"] = report.notes;
  return j;
}

void write_csv(std::ostream& out, const ScalingReport& report) {
  out << "n,epsilon,lower,upper,exact,bound_ok,witness,epsilon_float,log_lower_float,log_upper_float\n";
  for (const auto& c : report.cells) {
    out << c.n << ',' << to_string(c.eps) << ',' << to_string(c.lower) << ',' << to_string(c.upper) << ','
        << (c.exact ? "true" : "false") << ',' << (c.bound_ok ? "true" : "false") << ',' << csv_field(c.witness)
        << ',' << fixed(to_double(c.eps)) << ',' << fixed(c.lower > 1 ? log_of(c.lower) : 0.0) << ','
        << fixed(c.upper > 1 ? log_of(c.upper) : 0.0) << '\n';
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace emergence::io

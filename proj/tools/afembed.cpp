#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "afembed/algebra.hpp"
#include "afembed/bratteli.hpp"
#include "afembed/cpmaps.hpp"
#include "afembed/divisibility.hpp"
#include "afembed/error.hpp"
#include "afembed/json_io.hpp"
#include "afembed/matnum.hpp"
#include "afembed/qdcert.hpp"
#include "afembed/ultrasim.hpp"

namespace {

using afembed::AlmostMatrixUnits;
using afembed::BlockMatrix;
using afembed::BratteliChain;
using afembed::CpMap;
using afembed::DimensionVector;
using afembed::Error;
using afembed::ErrorCode;
using afembed::FdAlgebra;
using afembed::IndexedFamily;
using afembed::Int;
using afembed::Mat;
using afembed::MappingMatrix;
using afembed::MatrixUnitSystem;
using afembed::QdCertificate;
using afembed::UltraElement;
using json = afembed::jsonio::json;

struct RunConfig {
  std::map<std::string, double> tol;
  std::uint64_t seed = 1;
  int truncation = 0;  // 0 keeps the input length
  int window = 0;      // 0 keeps the input window
  std::string format = "json";

  double tol_or(const std::string& name, double fallback) const {
    const auto it = tol.find(name);
    return it == tol.end() ? fallback : it->second;
  }
};

Int int_from_string(const std::string& s) {
  try {
    return Int(s);
  } catch (const std::exception&) {
    afembed::fail(ErrorCode::ParseError, "\"" + s + "\" is not an integer");
  }
}

std::vector<Int> int_list_from_csv(const std::string& csv, const char* what) {
  std::vector<Int> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    if (item.empty()) afembed::fail(ErrorCode::ParseError, std::string(what) + ": empty entry");
    out.push_back(int_from_string(item));
  }
  if (out.empty()) afembed::fail(ErrorCode::ParseError, std::string(what) + ": empty list");
  return out;
}

DimensionVector dims_from_csv(const std::string& csv, const char* what) {
  return DimensionVector(int_list_from_csv(csv, what));
}

void print_text(const json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object() || (value.is_array() && !value.empty() && !value[0].is_number())) {
        os << pad << key << ":\n";
        print_text(value, os, indent + 1);
      } else {
        os << pad << key << ": " << value.dump() << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const json& item : j) {
      if (item.is_object() || item.is_array()) {
        os << pad << "-\n";
        print_text(item, os, indent + 1);
      } else {
        os << pad << "- " << item.dump() << "\n";
      }
    }
  } else {
    os << pad << j.dump() << "\n";
  }
}

void emit(const json& report, const RunConfig& cfg) {
  if (cfg.format == "text") {
    print_text(report, std::cout, 0);
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

json certificate_to_json(const QdCertificate& cert) {
  json per = json::array();
  for (const auto& r : cert.per_element) {
    per.push_back(json{{"norm", r.norm},
                       {"compression_norm", r.compression_norm},
                       {"commutator_norm", r.commutator_norm}});
  }
  return json{{"ambient_dim", cert.ambient_dim},
              {"subspace_dim", cert.subspace_dim},
              {"epsilon_achieved", cert.epsilon_achieved},
              {"per_element", std::move(per)}};
}

std::vector<Mat> elements_from_json(const json& j) {
  const json& arr = j.is_object() && j.contains("elements") ? j.at("elements") : j;
  if (!arr.is_array() || arr.empty()) {
    afembed::fail(ErrorCode::ParseError, "expected a nonempty array of matrices");
  }
  std::vector<Mat> out;
  for (const json& m : arr) out.push_back(afembed::jsonio::mat_from_json(m));
  return out;
}

AlmostMatrixUnits almost_units_from_json(const json& j) {
  AlmostMatrixUnits a;
  a.system_dims = afembed::jsonio::dims_from_json(
      j.is_object() && j.contains("system_dims") ? j.at("system_dims") : json());
  if (!j.contains("ambient_dims") || !j.at("ambient_dims").is_array()) {
    afembed::fail(ErrorCode::ParseError, "unit candidates: missing \"ambient_dims\"");
  }
  for (const json& e : j.at("ambient_dims")) {
    const Int v = afembed::jsonio::int_from_json(e, "ambient dimension");
    a.ambient_dims.push_back(
        static_cast<int>(afembed::to_checked_int64(v, "ambient dimension")));
  }
  if (!j.contains("units") || !j.at("units").is_array()) {
    afembed::fail(ErrorCode::ParseError, "unit candidates: missing \"units\"");
  }
  for (const json& fam : j.at("units")) {
    if (!fam.is_array()) {
      afembed::fail(ErrorCode::ParseError, "unit candidates: each block needs an array");
    }
    std::vector<BlockMatrix> blocks;
    for (const json& u : fam) blocks.push_back(afembed::jsonio::block_from_json(u));
    a.units.push_back(std::move(blocks));
  }
  return a;
}

int run_divides(const std::string& source, const std::string& target,
                std::size_t enumerate_limit, const RunConfig& cfg) {
  const DimensionVector m = dims_from_csv(source, "source");
  const DimensionVector n = dims_from_csv(target, "target");
  const auto witness = afembed::divides(m, n);
  json rep{{"source", afembed::jsonio::to_json(m)},
           {"target", afembed::jsonio::to_json(n)},
           {"divides", witness.has_value()}};
  if (witness) {
    rep["witness"] = afembed::jsonio::to_json(*witness);
    if (enumerate_limit > 0) {
      json all = json::array();
      for (const MappingMatrix& w : afembed::enumerate_witnesses(m, n, enumerate_limit)) {
        all.push_back(afembed::jsonio::to_json(w));
      }
      rep["witnesses"] = std::move(all);
    }
  }
  emit(rep, cfg);
  return witness ? 0 : 3;
}

int run_classify(const std::string& chain_path, const std::string& target,
                 std::size_t limit, const RunConfig& cfg) {
  const BratteliChain chain =
      afembed::jsonio::chain_from_json(afembed::jsonio::load_file(chain_path));
  const DimensionVector tgt = dims_from_csv(target, "target");
  const auto classes = afembed::classify_morphisms(chain, tgt, limit);
  json arr = json::array();
  std::size_t injective = 0;
  for (const auto& seq : classes) {
    if (seq.injective()) ++injective;
    arr.push_back(afembed::jsonio::to_json(seq));
  }
  emit(json{{"target", afembed::jsonio::to_json(tgt)},
            {"count", classes.size()},
            {"injective_count", injective},
            {"classes", std::move(arr)}},
       cfg);
  return 0;
}

int run_embed(const std::string& chain_path, const std::string& target,
              const RunConfig& cfg) {
  const BratteliChain chain =
      afembed::jsonio::chain_from_json(afembed::jsonio::load_file(chain_path));
  const DimensionVector tgt = dims_from_csv(target, "target");
  const auto decision = afembed::decide_embedding(chain, tgt);
  json rep{{"target", afembed::jsonio::to_json(tgt)}, {"embeds", decision.embeds}};
  if (decision.witness) rep["witness"] = afembed::jsonio::to_json(*decision.witness);
  emit(rep, cfg);
  return decision.embeds ? 0 : 3;
}

int run_uhf(const std::string& moduli_csv, const std::string& n_str, const RunConfig& cfg) {
  const std::vector<Int> moduli = int_list_from_csv(moduli_csv, "moduli");
  const Int n = int_from_string(n_str);
  const bool embeds = afembed::uhf_check(moduli, n);
  json moduli_json = json::array();
  for (const Int& m : moduli) moduli_json.push_back(afembed::jsonio::to_json(m));
  emit(json{{"moduli", std::move(moduli_json)},
            {"n", afembed::jsonio::to_json(n)},
            {"embeds", embeds}},
       cfg);
  return embeds ? 0 : 3;
}

int run_lift(const std::string& units_path, const RunConfig& cfg) {
  const AlmostMatrixUnits almost =
      almost_units_from_json(afembed::jsonio::load_file(units_path));
  const MatrixUnitSystem repaired = afembed::lift_matrix_units(almost);
  json units = json::array();
  for (std::size_t k = 0; k < repaired.num_blocks(); ++k) {
    json fam = json::array();
    const int nk = repaired.system_dims()[k];
    for (int i = 0; i < nk; ++i) {
      for (int j = 0; j < nk; ++j) {
        fam.push_back(afembed::jsonio::to_json(repaired.unit(k, i, j)));
      }
    }
    units.push_back(std::move(fam));
  }
  emit(json{{"system_dims", json(repaired.system_dims())},
            {"ambient_dims", json(repaired.ambient_dims())},
            {"relation_defect", repaired.relation_defect()},
            {"units", std::move(units)}},
       cfg);
  return 0;
}

int run_cp(const std::string& map_path, bool fix, bool unitalize_flag,
           const RunConfig& cfg) {
  const CpMap m = afembed::jsonio::cpmap_from_json(afembed::jsonio::load_file(map_path));
  const auto verdict = afembed::is_cp(m);
  json rep{{"cp", verdict.cp}, {"min_eigenvalue", verdict.min_eigenvalue}};
  if (verdict.cp && fix) {
    rep["fixed"] = afembed::jsonio::to_json(afembed::cp_near_contraction_fix(m));
  }
  if (verdict.cp && unitalize_flag) {
    rep["unitalized"] = afembed::jsonio::to_json(afembed::unitalize(m));
  }
  emit(rep, cfg);
  return verdict.cp ? 0 : 3;
}

int run_stinespring(const std::string& map_path, const RunConfig& cfg) {
  const CpMap m = afembed::jsonio::cpmap_from_json(afembed::jsonio::load_file(map_path));
  const auto data = afembed::stinespring(m);
  double residual = 0.0;
  for (int i = 0; i < m.source_dim; ++i) {
    for (int j = 0; j < m.source_dim; ++j) {
      Mat e(m.source_dim, m.source_dim);
      e.at(i, j) = 1.0;
      const Mat diff = data.reconstruct(e) - m.unit_image(i, j).to_dense();
      residual = std::max(residual, afembed::operator_norm(diff));
    }
  }
  const double v_norm = afembed::operator_norm(data.v);
  const double unit_norm = m.unit().op_norm();
  emit(json{{"kraus_count", data.multiplicity},
            {"reconstruction_residual", residual},
            {"v", afembed::jsonio::to_json(data.v)},
            {"norm_identity_gap", std::abs(v_norm * v_norm - unit_norm)}},
       cfg);
  return 0;
}

int run_upnorm(const std::string& family_path, const std::string& element_path,
               const RunConfig& cfg) {
  IndexedFamily fam =
      afembed::jsonio::family_from_json(afembed::jsonio::load_file(family_path));
  UltraElement x =
      afembed::jsonio::element_from_json(afembed::jsonio::load_file(element_path));
  if (cfg.truncation > 0) {
    if (cfg.truncation > fam.truncation() ||
        static_cast<std::size_t>(cfg.truncation) > x.terms.size()) {
      afembed::fail(ErrorCode::InvalidSequence,
                    "truncation override exceeds the supplied data");
    }
    fam.algebras.resize(static_cast<std::size_t>(cfg.truncation));
    x.terms.resize(static_cast<std::size_t>(cfg.truncation));
  }
  const int window = cfg.window > 0 ? cfg.window : fam.window;
  fam = IndexedFamily(std::move(fam.algebras), window);
  const double tol = cfg.tol_or("up_norm", -1.0);
  const double value = afembed::up_norm(fam, x, tol);  // NON_CONVERGENT exits 4
  const auto report = afembed::up_norm_report(fam, x, tol);
  emit(json{{"value", value},
            {"drift", report.drift},
            {"max_residual", report.max_residual},
            {"tol", report.tol},
            {"window", fam.window},
            {"truncation", fam.truncation()}},
       cfg);
  return 0;
}

int run_certify(const std::string& elements_path, const std::string& subspace_path,
                const RunConfig& cfg) {
  const std::vector<Mat> elements =
      elements_from_json(afembed::jsonio::load_file(elements_path));
  const json sub = afembed::jsonio::load_file(subspace_path);
  const Mat basis = afembed::jsonio::mat_from_json(
      sub.is_object() && sub.contains("basis") ? sub.at("basis") : sub);
  const QdCertificate cert = afembed::certify(elements, basis);
  emit(certificate_to_json(cert), cfg);
  return 0;
}

int run_qd_search(const std::string& elements_path, int max_dim, long long budget,
                  const RunConfig& cfg) {
  const std::vector<Mat> elements =
      elements_from_json(afembed::jsonio::load_file(elements_path));
  const QdCertificate cert = afembed::search_subspace(elements, max_dim, budget, cfg.seed);
  json rep = certificate_to_json(cert);
  rep["budget"] = budget;
  rep["seed"] = cfg.seed;
  emit(rep, cfg);
  return 0;
}

void apply_tol_entry(RunConfig& cfg, const std::string& entry) {
  const auto eq = entry.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size()) {
    afembed::fail(ErrorCode::ParseError, "--tol expects name=value, got \"" + entry + "\"");
  }
  const std::string name = entry.substr(0, eq);
  if (name != "up_norm") {
    afembed::fail(ErrorCode::InvalidSequence, "unknown tolerance \"" + name + "\"");
  }
  double value = 0.0;
  try {
    value = std::stod(entry.substr(eq + 1));
  } catch (const std::exception&) {
    afembed::fail(ErrorCode::ParseError, "--tol " + name + ": bad number");
  }
  if (!(value > 0.0)) {
    afembed::fail(ErrorCode::InvalidSequence, "tolerances must be positive");
  }
  cfg.tol[name] = value;
}

void load_config_env(RunConfig& cfg) {
  const char* raw = std::getenv("AFEMBED_CONFIG");
  if (raw == nullptr || *raw == '\0') return;
  // inline JSON object, or a path to a file holding one
  json j;
  if (*raw == '{') {
    j = json::parse(raw, nullptr, false);
    if (j.is_discarded()) {
      afembed::fail(ErrorCode::ParseError, "malformed JSON in AFEMBED_CONFIG");
    }
  } else {
    j = afembed::jsonio::load_file(raw);
  }
  if (!j.is_object()) afembed::fail(ErrorCode::ParseError, "config file must be an object");
  if (j.contains("tol")) {
    if (!j.at("tol").is_object()) {
      afembed::fail(ErrorCode::ParseError, "config \"tol\" must map names to numbers");
    }
    for (const auto& [name, value] : j.at("tol").items()) {
      if (!value.is_number()) {
        afembed::fail(ErrorCode::ParseError, "config \"tol\" must map names to numbers");
      }
      std::ostringstream os;
      os << name << "=" << value.get<double>();
      apply_tol_entry(cfg, os.str());
    }
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("truncation")) cfg.truncation = j.at("truncation").get<int>();
  if (j.contains("window")) cfg.window = j.at("window").get<int>();
  if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-dimensional C*-algebra embedding toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> tol_entries;
  app.add_option("--tol", tol_entries, "tolerance override, name=value")->take_all();
  app.add_option("--seed", cfg.seed, "seed for randomized searches");
  app.add_option("--truncation", cfg.truncation, "truncate indexed families to this length");
  app.add_option("--window", cfg.window, "tail window override");
  app.add_option("--format", cfg.format, "report format")
      ->check(CLI::IsMember({"json", "text"}));

  std::string source, target, chain_path, moduli_csv, n_str, units_path, map_path;
  std::string family_path, element_path, elements_path, subspace_path;
  std::size_t enumerate_limit = 0, classify_limit = 0;
  bool cp_fix = false, cp_unitalize = false;
  int max_dim = 1;
  long long budget = 1000;

  CLI::App* divides_cmd = app.add_subcommand("divides", "dimension vector divisibility");
  divides_cmd->add_option("--source", source, "source dimension vector, comma separated")
      ->required();
  divides_cmd->add_option("--target", target, "target dimension vector, comma separated")
      ->required();
  divides_cmd->add_option("--enumerate", enumerate_limit,
                          "also list up to this many witnesses");

  CLI::App* classify_cmd = app.add_subcommand("classify", "morphism classes into a target");
  classify_cmd->add_option("--chain", chain_path, "chain JSON file")->required();
  classify_cmd->add_option("--target", target, "target dimension vector")->required();
  classify_cmd->add_option("--limit", classify_limit, "cap on the number of classes");

  CLI::App* embed_cmd = app.add_subcommand("embed", "decide unital embeddability");
  embed_cmd->add_option("--chain", chain_path, "chain JSON file")->required();
  embed_cmd->add_option("--target", target, "target dimension vector")->required();

  CLI::App* uhf_cmd = app.add_subcommand("uhf", "UHF chain divisibility check");
  uhf_cmd->add_option("--moduli", moduli_csv, "matrix sizes, comma separated")->required();
  uhf_cmd->add_option("--n,--N", n_str, "target matrix size")->required();

  CLI::App* lift_cmd = app.add_subcommand("lift", "repair almost matrix units");
  lift_cmd->add_option("--units", units_path, "unit candidates JSON file")->required();

  CLI::App* cp_cmd = app.add_subcommand("cp", "complete positivity test");
  cp_cmd->add_option("--map", map_path, "CP map JSON file")->required();
  cp_cmd->add_flag("--fix", cp_fix, "also emit the near-contraction repair");
  cp_cmd->add_flag("--unitalize", cp_unitalize, "also emit the unitalization");

  CLI::App* stine_cmd = app.add_subcommand("stinespring", "dilation of a CP map");
  stine_cmd->add_option("--map", map_path, "CP map JSON file")->required();

  CLI::App* upnorm_cmd = app.add_subcommand("upnorm", "tail norm of a bounded sequence");
  upnorm_cmd->add_option("--family", family_path, "family JSON file")->required();
  upnorm_cmd->add_option("--element", element_path, "element JSON file")->required();

  CLI::App* certify_cmd = app.add_subcommand("certify", "compression certificate");
  certify_cmd->add_option("--elements", elements_path, "elements JSON file")->required();
  certify_cmd->add_option("--subspace", subspace_path, "subspace basis JSON file")
      ->required();

  CLI::App* search_cmd = app.add_subcommand("qd-search", "search for a good subspace");
  search_cmd->add_option("--elements", elements_path, "elements JSON file")->required();
  search_cmd->add_option("--max-dim", max_dim, "largest subspace dimension")->required();
  search_cmd->add_option("--budget", budget, "number of candidates to evaluate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    load_config_env(cfg);
    for (const std::string& entry : tol_entries) apply_tol_entry(cfg, entry);
    if (cfg.window < 0 || cfg.truncation < 0) {
      afembed::fail(ErrorCode::InvalidSequence, "window and truncation must be positive");
    }

    if (divides_cmd->parsed()) return run_divides(source, target, enumerate_limit, cfg);
    if (classify_cmd->parsed()) return run_classify(chain_path, target, classify_limit, cfg);
    if (embed_cmd->parsed()) return run_embed(chain_path, target, cfg);
    if (uhf_cmd->parsed()) return run_uhf(moduli_csv, n_str, cfg);
    if (lift_cmd->parsed()) return run_lift(units_path, cfg);
    if (cp_cmd->parsed()) return run_cp(map_path, cp_fix, cp_unitalize, cfg);
    if (stine_cmd->parsed()) return run_stinespring(map_path, cfg);
    if (upnorm_cmd->parsed()) return run_upnorm(family_path, element_path, cfg);
    if (certify_cmd->parsed()) return run_certify(elements_path, subspace_path, cfg);
    if (search_cmd->parsed()) return run_qd_search(elements_path, max_dim, budget, cfg);
    return 2;
  } catch (const Error& e) {
    const json err{{"error", {{"code", afembed::error_code_name(e.code())},
                              {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return afembed::error_exit_class(e.code());
  } catch (const std::exception& e) {
    const json err{{"error", {{"code", "INTERNAL"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 4;
  }
}

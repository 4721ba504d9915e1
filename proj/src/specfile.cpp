#include "colorquant/specfile.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cq {

namespace {

using nlohmann::json;

std::string child(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) known = true;
    if (!known) throw SpecError(child(path, item.key()), "unknown key");
  }
}

const json& want(const json& obj, const std::string& path,
                 const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw SpecError(child(path, key), "missing required field");
  return *it;
}

const json& want_object(const json& node, const std::string& path) {
  if (!node.is_object()) throw SpecError(path, "expected an object");
  return node;
}

const json& want_array(const json& node, const std::string& path) {
  if (!node.is_array()) throw SpecError(path, "expected an array");
  return node;
}

std::uint32_t want_uint(const json& node, const std::string& path) {
  if (!node.is_number_unsigned())
    throw SpecError(path, "expected a nonnegative integer");
  std::uint64_t v = node.get<std::uint64_t>();
  if (v > 0xffffffffull) throw SpecError(path, "integer out of range");
  return static_cast<std::uint32_t>(v);
}

std::int64_t want_int(const json& node, const std::string& path) {
  if (!node.is_number_integer())
    throw SpecError(path, "expected an integer");
  return node.get<std::int64_t>();
}

std::string want_string(const json& node, const std::string& path) {
  if (!node.is_string()) throw SpecError(path, "expected a string");
  return node.get<std::string>();
}

// all numeric literals are strings holding exact scalars, never floats
Scalar want_scalar(const json& node, const std::string& path,
                   std::uint32_t conductor) {
  std::string text = want_string(node, path);
  try {
    return Scalar::parse(text, conductor);
  } catch (const Error& e) {
    throw SpecError(path, e.what());
  }
}

Rational want_rational(const json& node, const std::string& path) {
  std::string text = want_string(node, path);
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    throw SpecError(path, e.what());
  }
}

std::vector<std::vector<Scalar>> want_scalar_matrix(const json& node,
                                                    const std::string& path,
                                                    std::size_t size,
                                                    std::uint32_t conductor) {
  const json& rows = want_array(node, path);
  if (rows.size() != size)
    throw SpecError(path, "expected " + std::to_string(size) + " rows");
  std::vector<std::vector<Scalar>> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const json& row = want_array(rows[r], child(path, r));
    if (row.size() != size)
      throw SpecError(child(path, r),
                      "expected " + std::to_string(size) + " entries");
    std::vector<Scalar> vals;
    for (std::size_t c = 0; c < row.size(); ++c)
      vals.push_back(want_scalar(row[c], child(child(path, r), c), conductor));
    out.push_back(std::move(vals));
  }
  return out;
}

void parse_group(AlgebraSpec& spec, const json& node) {
  const json& obj = want_object(node, "/group");
  check_keys(obj, "/group", {"free_rank", "torsion_orders"});
  GradingGroup g;
  g.free_rank = want_uint(want(obj, "/group", "free_rank"), "/group/free_rank");
  if (auto it = obj.find("torsion_orders"); it != obj.end()) {
    const json& arr = want_array(*it, "/group/torsion_orders");
    for (std::size_t k = 0; k < arr.size(); ++k)
      g.torsion_orders.push_back(
          want_int(arr[k], child("/group/torsion_orders", k)));
  }
  try {
    g.validate();
  } catch (const Error& e) {
    throw SpecError("/group", e.what());
  }
  spec.group = std::move(g);
}

void parse_basis(AlgebraSpec& spec, const json& node) {
  const json& arr = want_array(node, "/basis");
  std::size_t rank = spec.group->rank();
  std::set<std::string> seen;
  std::vector<BasisEntrySpec> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    std::string path = child("/basis", k);
    const json& obj = want_object(arr[k], path);
    check_keys(obj, path, {"name", "degree"});
    BasisEntrySpec entry;
    entry.name = want_string(want(obj, path, "name"), child(path, "name"));
    if (entry.name.empty())
      throw SpecError(child(path, "name"), "empty basis name");
    if (!seen.insert(entry.name).second)
      throw SpecError(child(path, "name"), "duplicate basis name");
    const json& deg = want_array(want(obj, path, "degree"),
                                 child(path, "degree"));
    if (deg.size() != rank)
      throw SpecError(child(path, "degree"),
                      "expected " + std::to_string(rank) + " coordinates");
    for (std::size_t c = 0; c < deg.size(); ++c)
      entry.degree.push_back(want_int(deg[c], child(child(path, "degree"), c)));
    out.push_back(std::move(entry));
  }
  if (out.empty()) throw SpecError("/basis", "empty basis");
  spec.basis = std::move(out);
}

std::uint32_t want_index(const json& node, const std::string& path,
                         std::size_t dim) {
  std::uint32_t v = want_uint(node, path);
  if (v >= dim) throw SpecError(path, "basis index out of range");
  return v;
}

void parse_bracket(AlgebraSpec& spec, const json& node) {
  const json& arr = want_array(node, "/bracket");
  std::size_t dim = spec.basis->size();
  for (std::size_t k = 0; k < arr.size(); ++k) {
    std::string path = child("/bracket", k);
    const json& obj = want_object(arr[k], path);
    check_keys(obj, path, {"i", "j", "terms"});
    BracketEntrySpec entry;
    entry.i = want_index(want(obj, path, "i"), child(path, "i"), dim);
    entry.j = want_index(want(obj, path, "j"), child(path, "j"), dim);
    const json& terms = want_array(want(obj, path, "terms"),
                                   child(path, "terms"));
    for (std::size_t t = 0; t < terms.size(); ++t) {
      std::string tpath = child(child(path, "terms"), t);
      const json& term = want_object(terms[t], tpath);
      check_keys(term, tpath, {"k", "coeff"});
      BracketTermSpec ts;
      ts.k = want_index(want(term, tpath, "k"), child(tpath, "k"), dim);
      ts.coeff = want_scalar(want(term, tpath, "coeff"), child(tpath, "coeff"),
                             spec.conductor);
      entry.terms.push_back(std::move(ts));
    }
    spec.bracket.push_back(std::move(entry));
  }
}

void parse_cobracket(AlgebraSpec& spec, const json& node) {
  const json& arr = want_array(node, "/cobracket");
  std::size_t dim = spec.basis->size();
  spec.has_cobracket = true;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    std::string path = child("/cobracket", k);
    const json& obj = want_object(arr[k], path);
    check_keys(obj, path, {"i", "terms"});
    CobracketEntrySpec entry;
    entry.i = want_index(want(obj, path, "i"), child(path, "i"), dim);
    const json& terms = want_array(want(obj, path, "terms"),
                                   child(path, "terms"));
    for (std::size_t t = 0; t < terms.size(); ++t) {
      std::string tpath = child(child(path, "terms"), t);
      const json& term = want_object(terms[t], tpath);
      check_keys(term, tpath, {"j", "k", "coeff"});
      CobracketTermSpec ts;
      ts.j = want_index(want(term, tpath, "j"), child(tpath, "j"), dim);
      ts.k = want_index(want(term, tpath, "k"), child(tpath, "k"), dim);
      ts.coeff = want_scalar(want(term, tpath, "coeff"), child(tpath, "coeff"),
                             spec.conductor);
      entry.terms.push_back(std::move(ts));
    }
    spec.cobracket.push_back(std::move(entry));
  }
}

void parse_rmatrix(AlgebraSpec& spec, const json& node) {
  const json& arr = want_array(node, "/rmatrix");
  std::set<std::string> names;
  for (const auto& b : *spec.basis) names.insert(b.name);
  std::vector<TensorTermSpec> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    std::string path = child("/rmatrix", k);
    const json& obj = want_object(arr[k], path);
    check_keys(obj, path, {"indices", "coeff"});
    TensorTermSpec term;
    const json& idx = want_array(want(obj, path, "indices"),
                                 child(path, "indices"));
    if (idx.size() != 2)
      throw SpecError(child(path, "indices"),
                      "an r-matrix term has exactly two slots");
    for (std::size_t s = 0; s < idx.size(); ++s) {
      std::string label =
          want_string(idx[s], child(child(path, "indices"), s));
      if (!names.count(label))
        throw SpecError(child(child(path, "indices"), s),
                        "unknown basis name " + label);
      term.indices.push_back(std::move(label));
    }
    const json& coeff = want_array(want(obj, path, "coeff"),
                                   child(path, "coeff"));
    if (coeff.size() != 1)
      throw SpecError(child(path, "coeff"),
                      "a classical r-matrix term carries one coefficient");
    term.coeff.push_back(want_scalar(coeff[0], child(child(path, "coeff"), 0),
                                     spec.conductor));
    out.push_back(std::move(term));
  }
  spec.rmatrix = std::move(out);
}

void parse_cartan(AlgebraSpec& spec, const json& node) {
  const json& obj = want_object(node, "/cartan");
  check_keys(obj, "/cartan", {"A", "tau", "d", "eps_consts"});
  CartanData cd;
  const json& rows = want_array(want(obj, "/cartan", "A"), "/cartan/A");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const json& row = want_array(rows[r], child("/cartan/A", r));
    std::vector<std::int64_t> vals;
    for (std::size_t c = 0; c < row.size(); ++c)
      vals.push_back(want_int(row[c], child(child("/cartan/A", r), c)));
    cd.A.push_back(std::move(vals));
  }
  if (auto it = obj.find("tau"); it != obj.end()) {
    const json& arr = want_array(*it, "/cartan/tau");
    for (std::size_t k = 0; k < arr.size(); ++k)
      cd.tau.push_back(want_uint(arr[k], child("/cartan/tau", k)));
  }
  const json& weights = want_array(want(obj, "/cartan", "d"), "/cartan/d");
  for (std::size_t k = 0; k < weights.size(); ++k)
    cd.d.push_back(want_rational(weights[k], child("/cartan/d", k)));
  try {
    cd.validate();
  } catch (const Error& e) {
    throw SpecError("/cartan", e.what());
  }
  if (auto it = obj.find("eps_consts"); it != obj.end())
    spec.cartan_eps_consts = want_scalar_matrix(
        *it, "/cartan/eps_consts", cd.rank(), spec.conductor);
  spec.cartan = std::move(cd);
}

void parse_options(AlgebraSpec& spec, const json& node) {
  const json& obj = want_object(node, "/options");
  check_keys(obj, "/options", {"lambda_order", "word_bound", "degree_bound"});
  if (auto it = obj.find("lambda_order"); it != obj.end()) {
    spec.options.lambda_order = want_uint(*it, "/options/lambda_order");
    if (spec.options.lambda_order == 0)
      throw SpecError("/options/lambda_order", "order must be positive");
  }
  if (auto it = obj.find("word_bound"); it != obj.end())
    spec.options.word_bound = want_uint(*it, "/options/word_bound");
  if (auto it = obj.find("degree_bound"); it != obj.end())
    spec.options.degree_bound = want_uint(*it, "/options/degree_bound");
}

}  // namespace

AlgebraSpec parse_spec_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("/", std::string("not valid JSON: ") + e.what());
  }
  want_object(doc, "/");
  check_keys(doc, "", {"scalars", "group", "epsilon", "basis", "bracket",
                       "cobracket", "rmatrix", "cartan", "options"});

  AlgebraSpec spec;
  if (auto it = doc.find("scalars"); it != doc.end()) {
    const json& obj = want_object(*it, "/scalars");
    check_keys(obj, "/scalars", {"conductor"});
    spec.conductor = want_uint(want(obj, "/scalars", "conductor"),
                               "/scalars/conductor");
    if (spec.conductor == 0)
      throw SpecError("/scalars/conductor", "conductor must be positive");
  }

  bool wants_algebra = doc.contains("group") || doc.contains("epsilon") ||
                       doc.contains("basis") || doc.contains("bracket") ||
                       doc.contains("cobracket") || doc.contains("rmatrix");
  if (wants_algebra) {
    for (const char* section : {"group", "epsilon", "basis"})
      if (!doc.contains(section))
        throw SpecError(child("", section), "missing required section");
    parse_group(spec, doc.at("group"));
    parse_basis(spec, doc.at("basis"));
    const json& eps = want_object(doc.at("epsilon"), "/epsilon");
    check_keys(eps, "/epsilon", {"matrix"});
    spec.epsilon = want_scalar_matrix(want(eps, "/epsilon", "matrix"),
                                      "/epsilon/matrix", spec.group->rank(),
                                      spec.conductor);
    if (doc.contains("bracket")) parse_bracket(spec, doc.at("bracket"));
    if (doc.contains("cobracket")) parse_cobracket(spec, doc.at("cobracket"));
    if (doc.contains("rmatrix")) parse_rmatrix(spec, doc.at("rmatrix"));
  }

  if (doc.contains("cartan")) parse_cartan(spec, doc.at("cartan"));
  if (doc.contains("options")) parse_options(spec, doc.at("options"));
  return spec;
}

AlgebraSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("/", "cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

}  // namespace cq

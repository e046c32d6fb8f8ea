#pragma once

// JSON encoding of signatures and finite structures.
//
// Structure document:
//   { "universe": ["0", "1"],
//     "functions": { "+": [["0","1"],["1","0"]] },     nested, one level per argument
//     "relations": { "lt": [["0","1"]] },                tuples that hold
//     "relation_arities": { "lt": 2 },                   only needed for empty relations
//     "constants": { "0": "0", "1": "1" } }
//
// Signature document:
//   { "functions": { "+": 2 }, "relations": { "lt": 2 }, "constants": ["0"] }

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "acf/error.hpp"
#include "acf/semantics.hpp"
#include "acf/syntax.hpp"

namespace acf {

namespace detail {

using Json = nlohmann::json;

inline const Json& member(const Json& doc, const char* key) {
  if (!doc.is_object()) throw DomainError("expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw DomainError(std::string("missing field '") + key + "'");
  return *it;
}

inline Element element_named(const std::map<std::string, Element>& index, const Json& v) {
  if (!v.is_string()) throw DomainError("universe elements are strings, got " + v.dump());
  auto it = index.find(v.get<std::string>());
  if (it == index.end()) throw DomainError("unknown element '" + v.get<std::string>() + "'");
  return it->second;
}

inline std::size_t table_depth(const Json& t) {
  std::size_t d = 0;
  for (const Json* cur = &t; cur->is_array(); cur = &(*cur)[0]) {
    ++d;
    if (cur->empty()) break;
  }
  return d;
}

// Flattens a nested table row-major; every level must have n entries.
inline void flatten(const Json& t, std::size_t depth, std::size_t n, const std::map<std::string, Element>& index,
                    std::vector<Element>& out) {
  if (depth == 0) {
    out.push_back(element_named(index, t));
    return;
  }
  if (!t.is_array() || t.size() != n) throw DomainError("function table rows must list every element");
  for (const auto& row : t) flatten(row, depth - 1, n, index, out);
}

inline Json nest(const std::vector<Element>& flat, std::size_t& pos, std::size_t depth, std::size_t n,
                 const std::vector<std::string>& names) {
  if (depth == 0) return names[flat[pos++]];
  Json arr = Json::array();
  for (std::size_t i = 0; i < n; ++i) arr.push_back(nest(flat, pos, depth - 1, n, names));
  return arr;
}

} // namespace detail

inline Signature signature_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw DomainError("signature must be a JSON object");
  std::vector<Signature::Symbol> functions, relations;
  std::vector<std::string> constants;
  if (doc.contains("functions"))
    for (const auto& [name, arity] : doc["functions"].items()) functions.emplace_back(name, arity.get<std::size_t>());
  if (doc.contains("relations"))
    for (const auto& [name, arity] : doc["relations"].items()) relations.emplace_back(name, arity.get<std::size_t>());
  if (doc.contains("constants"))
    for (const auto& c : doc["constants"]) constants.push_back(c.get<std::string>());
  return Signature(std::move(functions), std::move(relations), std::move(constants));
}

inline FiniteStructure structure_from_json(const nlohmann::json& doc) {
  using detail::member;
  try {
    std::vector<std::string> universe;
    for (const auto& e : member(doc, "universe")) universe.push_back(e.get<std::string>());
    if (universe.empty()) throw DomainError("universe must be nonempty");
    std::map<std::string, Element> index;
    for (Element i = 0; i < universe.size(); ++i)
      if (!index.emplace(universe[i], i).second) throw DomainError("duplicate element '" + universe[i] + "'");
    const std::size_t n = universe.size();

    std::vector<Signature::Symbol> fsyms, rsyms;
    std::vector<std::string> csyms;
    std::map<std::string, FiniteStructure::FunctionTable> functions;
    std::map<std::string, FiniteStructure::RelationTable> relations;
    std::map<std::string, Element> constants;

    if (doc.contains("functions")) {
      for (const auto& [name, table] : doc["functions"].items()) {
        const std::size_t arity = detail::table_depth(table);
        if (arity == 0) throw DomainError("function '" + name + "' needs a table");
        FiniteStructure::FunctionTable flat;
        detail::flatten(table, arity, n, index, flat);
        fsyms.emplace_back(name, arity);
        functions.emplace(name, std::move(flat));
      }
    }
    std::map<std::string, std::size_t> declared;
    if (doc.contains("relation_arities"))
      for (const auto& [name, a] : doc["relation_arities"].items()) declared[name] = a.get<std::size_t>();
    if (doc.contains("relations")) {
      for (const auto& [name, tuples] : doc["relations"].items()) {
        if (!tuples.is_array()) throw DomainError("relation '" + name + "' must list tuples");
        std::size_t arity = declared.count(name) ? declared[name] : 0;
        if (arity == 0) {
          if (tuples.empty()) throw DomainError("empty relation '" + name + "' needs relation_arities");
          arity = tuples[0].size();
        }
        FiniteStructure::RelationTable table;
        std::size_t cells = 1;
        for (std::size_t i = 0; i < arity; ++i) cells *= n;
        table.assign(cells, false);
        for (const auto& tup : tuples) {
          if (!tup.is_array() || tup.size() != arity)
            throw DomainError("relation '" + name + "' tuple has the wrong length");
          std::size_t idx = 0;
          for (const auto& v : tup) idx = idx * n + detail::element_named(index, v);
          table[idx] = true;
        }
        rsyms.emplace_back(name, arity);
        relations.emplace(name, std::move(table));
      }
    }
    if (doc.contains("constants")) {
      for (const auto& [name, v] : doc["constants"].items()) {
        csyms.push_back(name);
        constants.emplace(name, detail::element_named(index, v));
      }
    }
    return FiniteStructure(Signature(std::move(fsyms), std::move(rsyms), std::move(csyms)), std::move(universe),
                           std::move(functions), std::move(relations), std::move(constants));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed structure: ") + e.what());
  }
}

inline nlohmann::json structure_to_json(const FiniteStructure& s) {
  nlohmann::json doc;
  const auto& names = s.universe();
  const std::size_t n = s.size();
  doc["universe"] = names;
  doc["functions"] = nlohmann::json::object();
  for (const auto& [name, arity] : s.signature().functions()) {
    std::size_t pos = 0;
    doc["functions"][name] = detail::nest(s.function_tables().at(name), pos, arity, n, names);
  }
  doc["relations"] = nlohmann::json::object();
  doc["relation_arities"] = nlohmann::json::object();
  for (const auto& [name, arity] : s.signature().relations()) {
    nlohmann::json tuples = nlohmann::json::array();
    const auto& table = s.relation_tables().at(name);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      if (!table[idx]) continue;
      std::vector<std::string> tup(arity);
      for (std::size_t i = arity, rest = idx; i-- > 0; rest /= n) tup[i] = names[rest % n];
      tuples.push_back(tup);
    }
    doc["relations"][name] = tuples;
    doc["relation_arities"][name] = arity;
  }
  doc["constants"] = nlohmann::json::object();
  for (const auto& [name, e] : s.constant_values()) doc["constants"][name] = names[e];
  return doc;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline FiniteStructure load_structure(const std::string& path) { return structure_from_json(read_json_file(path)); }

inline Signature load_signature(const std::string& path) { return signature_from_json(read_json_file(path)); }

} // namespace acf

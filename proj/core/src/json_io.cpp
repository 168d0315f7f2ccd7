#include "gibmap/json_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace gibmap {
namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) known = true;
    if (!known) throw ParseError(where + ": unknown field '" + it.key() + "'");
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

std::vector<std::string> string_list(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : arr) {
    if (!e.is_string()) throw ParseError(where + ": expected a string");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

RawNetwork parse_network_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!root.is_object()) throw ParseError("root: expected an object");
  reject_unknown(root, {"variables"}, "root");
  const json& vars = field(root, "variables", "root");
  if (!vars.is_array()) throw ParseError("variables: expected an array");

  RawNetwork raw;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const json& jv = vars[i];
    std::string where = "variables[" + std::to_string(i) + "]";
    if (!jv.is_object()) throw ParseError(where + ": expected an object");
    reject_unknown(jv, {"name", "values", "parents", "concepts", "cpt"}, where);

    RawVariable rv;
    const json& jname = field(jv, "name", where);
    if (!jname.is_string()) throw ParseError(where + ".name: expected a string");
    rv.name = jname.get<std::string>();
    where = "variable '" + rv.name + "'";
    rv.values = string_list(field(jv, "values", where), where + ".values");
    if (jv.contains("parents"))
      rv.parents = string_list(jv["parents"], where + ".parents");

    if (jv.contains("concepts")) {
      const json& jc = jv["concepts"];
      if (!jc.is_array()) throw ParseError(where + ".concepts: expected an array");
      for (const auto& c : jc) {
        std::string cw = where + ".concepts";
        if (!c.is_object()) throw ParseError(cw + ": expected an object");
        reject_unknown(c, {"name", "values"}, cw);
        RawConcept rc;
        const json& cn = field(c, "name", cw);
        if (!cn.is_string()) throw ParseError(cw + ".name: expected a string");
        rc.name = cn.get<std::string>();
        rc.values = string_list(field(c, "values", cw), cw + ".values");
        rv.concepts.push_back(std::move(rc));
      }
    }

    const json& jcpt = field(jv, "cpt", where);
    if (!jcpt.is_array()) throw ParseError(where + ".cpt: expected an array");
    for (std::size_t r = 0; r < jcpt.size(); ++r) {
      const json& jrow = jcpt[r];
      std::string rw = where + ".cpt[" + std::to_string(r) + "]";
      if (!jrow.is_object()) throw ParseError(rw + ": expected an object");
      reject_unknown(jrow, {"given", "p"}, rw);
      RawCptRow row;
      const json& jgiven = field(jrow, "given", rw);
      if (!jgiven.is_object()) throw ParseError(rw + ".given: expected an object");
      for (auto it = jgiven.begin(); it != jgiven.end(); ++it) {
        if (!it.value().is_string()) throw ParseError(rw + ".given: expected string values");
        row.given[it.key()] = it.value().get<std::string>();
      }
      const json& jp = field(jrow, "p", rw);
      if (!jp.is_object()) throw ParseError(rw + ".p: expected an object");
      for (auto it = jp.begin(); it != jp.end(); ++it) {
        if (!it.value().is_number()) throw ParseError(rw + ".p: expected numbers");
        row.p[it.key()] = it.value().get<double>();
      }
      rv.cpt.push_back(std::move(row));
    }
    raw.variables.push_back(std::move(rv));
  }
  return raw;
}

RawNetwork load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network_json(buf.str());
}

std::string network_to_json(const RawNetwork& raw) {
  nlohmann::ordered_json root;
  root["variables"] = nlohmann::ordered_json::array();
  for (const auto& rv : raw.variables) {
    nlohmann::ordered_json jv;
    jv["name"] = rv.name;
    jv["values"] = rv.values;
    jv["parents"] = rv.parents;
    jv["concepts"] = nlohmann::ordered_json::array();
    for (const auto& c : rv.concepts)
      jv["concepts"].push_back({{"name", c.name}, {"values", c.values}});
    jv["cpt"] = nlohmann::ordered_json::array();
    for (const auto& row : rv.cpt) {
      nlohmann::ordered_json jrow;
      jrow["given"] = nlohmann::ordered_json(row.given);
      jrow["p"] = nlohmann::ordered_json(row.p);
      jv["cpt"].push_back(std::move(jrow));
    }
    root["variables"].push_back(std::move(jv));
  }
  return root.dump(2);
}

}  // namespace gibmap

#include "gradsym/catalog.hpp"

#include <json.hpp>

namespace gradsym {

using json = nlohmann::json;

std::string SymmetryCase::id() const {
  std::string s = table + "." + row;
  if (!reading.empty()) s += "[" + reading + "]";
  return s;
}

Expr instantiate(const Expr& e, const Assignment& a) {
  if (a.empty()) return e;
  Bindings b;
  for (const auto& [name, v] : a) b[Symbol::intern(name, SymbolKind::Parameter)] = Expr(v);
  return substitute(e, b);
}

PdeSpec instantiate(const PdeSpec& p, const Assignment& a) {
  PdeSpec out = p;
  out.D = instantiate(p.D, a);
  out.Q = instantiate(p.Q, a);
  out.rhs = instantiate(p.rhs, a);
  return out;
}

VectorField instantiate(const VectorField& X, const Assignment& a) {
  return X.map([&](const Expr& e) { return instantiate(e, a); });
}

namespace {

struct Constraint {
  Expr lhs;
  Expr rhs;
  bool equal;
};

Constraint parse_constraint(const std::string& text) {
  auto ne = text.find("!=");
  auto eq = text.find('=');
  if (ne != std::string::npos)
    return {parse(text.substr(0, ne)), parse(text.substr(ne + 2)), false};
  if (eq == std::string::npos) throw InvalidArgument("constraint without '=' or '!=': " + text);
  return {parse(text.substr(0, eq)), parse(text.substr(eq + 1)), true};
}

}  // namespace

bool SymmetryCase::satisfies(const Assignment& a) const {
  for (const auto& text : constraints) {
    Constraint c = parse_constraint(text);
    auto v = eval_exact(instantiate(c.lhs - c.rhs, a), {});
    if (!v) throw InvalidArgument("constraint does not evaluate to a number: " + text);
    if (c.equal != v->is_zero()) return false;
  }
  return true;
}

std::vector<Assignment> SymmetryCase::assignments() const {
  std::vector<Assignment> out{Assignment{}};
  for (const auto& [name, values] : params) {
    std::vector<Assignment> next;
    for (const auto& a : out)
      for (const auto& v : values) {
        Assignment b = a;
        b[name] = v;
        next.push_back(std::move(b));
      }
    out = std::move(next);
  }
  std::vector<Assignment> ok;
  for (auto& a : out)
    if (satisfies(a)) ok.push_back(std::move(a));
  return ok;
}

namespace {

json field_json(const NamedField& f) {
  json xi = json::array();
  for (const auto& c : f.field.xi) xi.push_back(c.str());
  json j{{"name", f.name}, {"xi", xi}, {"eta", f.field.eta.str()}};
  if (!f.admitted) j["admitted"] = false;
  return j;
}

NamedField field_from(const json& j) {
  NamedField f;
  f.name = j.at("name").get<std::string>();
  for (const auto& c : j.at("xi")) f.field.xi.push_back(parse(c.get<std::string>()));
  f.field.eta = parse(j.at("eta").get<std::string>());
  f.admitted = j.value("admitted", true);
  return f;
}

const char* form_name(PdeForm f) {
  switch (f) {
    case PdeForm::Quasilinear:
      return "quasilinear";
    case PdeForm::Divergence:
      return "divergence";
    case PdeForm::General:
      return "general";
  }
  return "general";
}

PdeForm form_from(const std::string& s) {
  if (s == "quasilinear") return PdeForm::Quasilinear;
  if (s == "divergence") return PdeForm::Divergence;
  if (s == "general") return PdeForm::General;
  throw InvalidArgument("unknown equation form: " + s);
}

}  // namespace

std::string cases_to_json(const std::vector<SymmetryCase>& cs) {
  json arr = json::array();
  for (const auto& c : cs) {
    json params = json::object();
    for (const auto& [n, vs] : c.params) {
      json a = json::array();
      for (const auto& v : vs) a.push_back(v.str());
      params[n] = a;
    }
    json gens = json::array();
    for (const auto& g : c.generators) gens.push_back(field_json(g));
    json j{{"table", c.table},
           {"row", c.row},
           {"dim", c.pde.dim},
           {"form", form_name(c.pde.form)},
           {"params", params},
           {"constraints", c.constraints},
           {"generators", gens},
           {"principal_size", c.principal_size},
           {"includes_principal", c.includes_principal},
           {"expected_dim", c.expected_dim}};
    if (c.pde.form == PdeForm::General) {
      j["rhs"] = c.pde.rhs.str();
    } else {
      j["D"] = c.pde.D.str();
      j["Q"] = c.pde.Q.str();
    }
    if (!c.reading.empty()) j["reading"] = c.reading;
    if (!c.adopted) j["adopted"] = false;
    if (!c.note.empty()) j["note"] = c.note;
    if (c.negative)
      j["negative"] = {{"generator", c.negative->generator},
                       {"slot", c.negative->slot},
                       {"add", c.negative->add.str()}};
    else
      j["negative"] = nullptr;
    arr.push_back(j);
  }
  return json{{"schema", "gradsym-catalog/1"}, {"cases", arr}}.dump(2);
}

std::vector<SymmetryCase> cases_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("catalog JSON: ") + e.what(), e.byte);
  }
  JetSpace::two();
  std::vector<SymmetryCase> out;
  for (const auto& j : doc.at("cases")) {
    SymmetryCase c;
    c.table = j.at("table").get<std::string>();
    c.row = j.at("row").get<std::string>();
    c.reading = j.value("reading", "");
    c.adopted = j.value("adopted", true);
    c.note = j.value("note", "");
    int dim = j.at("dim").get<int>();
    PdeForm form = form_from(j.at("form").get<std::string>());
    if (form == PdeForm::General)
      c.pde = PdeSpec::general(dim, parse(j.at("rhs").get<std::string>()));
    else if (form == PdeForm::Quasilinear)
      c.pde = PdeSpec::quasilinear(parse(j.at("D").get<std::string>()), parse(j.at("Q").get<std::string>()));
    else
      c.pde = PdeSpec::divergence(parse(j.at("D").get<std::string>()), parse(j.at("Q").get<std::string>()));
    if (c.pde.dim != dim) throw InvalidArgument("case " + c.id() + ": dimension does not match form");
    for (const auto& [n, vs] : j.at("params").items())
      for (const auto& v : vs) c.params[n].push_back(Scalar::parse(v.get<std::string>()));
    c.constraints = j.at("constraints").get<std::vector<std::string>>();
    for (const auto& g : j.at("generators")) c.generators.push_back(field_from(g));
    c.principal_size = j.at("principal_size").get<std::size_t>();
    c.includes_principal = j.value("includes_principal", false);
    c.expected_dim = j.at("expected_dim").get<std::size_t>();
    if (j.contains("negative") && !j.at("negative").is_null()) {
      const auto& n = j.at("negative");
      c.negative = Perturbation{n.at("generator").get<std::size_t>(), n.at("slot").get<int>(),
                                parse(n.at("add").get<std::string>())};
    } else {
      c.negative.reset();
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace gradsym

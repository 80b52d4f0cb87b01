#include "psl2q/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "psl2q/oracle.hpp"

namespace psl2q::cli {

namespace {

using nlohmann::json;

std::string kind_name(ElemType t) {
  switch (t) {
    case ElemType::Identity: return "identity";
    case ElemType::Unipotent: return "unipotent";
    case ElemType::Split: return "split";
    default: return "nonsplit";
  }
}

std::string poly_string(const Field& F) {
  const auto& c = F.defining_poly();
  std::string s;
  for (size_t i = c.size(); i-- > 0;) {
    if (i + 1 != c.size() && c[i] == 0) continue;
    if (!s.empty()) s += "+";
    if (i == 0) {
      s += std::to_string(c[i]);
    } else {
      if (c[i] != 1) s += std::to_string(c[i]) + "*";
      s += i == 1 ? "x" : "x^" + std::to_string(i);
    }
  }
  return s.empty() ? "0" : s;
}

struct ClassRow {
  ClassId id;
  std::string selector;
  std::string kind;
  uint64_t order = 0;
  uint64_t size = 0;
  PElem rep;
};

std::vector<ClassRow> class_rows(const Group& g) {
  std::vector<ClassRow> rows;
  for (auto& [id, size] : all_class_ids(g)) {
    ClassRow r;
    r.id = id;
    r.selector = class_selector(g, id);
    r.kind = kind_name(id.kind);
    r.size = size;
    r.rep = class_representative(g, id);
    r.order = order(g, r.rep);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string selector_listing(const std::vector<ClassRow>& rows) {
  std::string s;
  for (const auto& r : rows) {
    if (!s.empty()) s += ", ";
    s += r.selector + " (ord " + std::to_string(r.order) + ")";
  }
  return s;
}

ClassId resolve_selector(const Group& g, const std::vector<ClassRow>& rows,
                         const std::string& sel) {
  for (const auto& r : rows)
    if (r.selector == sel) return r.id;
  if (sel.rfind("tr:", 0) == 0) {
    uint64_t enc = std::stoull(sel.substr(3));
    if (enc >= g.q()) throw std::invalid_argument("trace encoding out of range");
    uint64_t key = std::min(enc, (-g.F().from_code(enc)).code);
    for (const auto& r : rows)
      if (r.id.kind != ElemType::Identity && r.id.kind != ElemType::Unipotent &&
          r.id.trace_key == key)
        return r.id;
    throw std::invalid_argument("trace " + std::to_string(enc) +
                                " does not label a semisimple class; valid selectors: " +
                                selector_listing(rows));
  }
  if (sel.rfind("ord:", 0) == 0) {
    std::string rest = sel.substr(4);
    uint64_t n = 0, k = 1;
    auto colon = rest.find(':');
    n = std::stoull(rest.substr(0, colon));
    if (colon != std::string::npos) k = std::stoull(rest.substr(colon + 1));
    if (k == 0) throw std::invalid_argument("class index is 1-based");
    for (const auto& r : rows)
      if (r.order == n && --k == 0) return r.id;
    throw std::invalid_argument("no class of order " + std::to_string(n) +
                                " with that index; valid selectors: " + selector_listing(rows));
  }
  throw std::invalid_argument("unknown class selector '" + sel +
                              "'; valid selectors: " + selector_listing(rows));
}

json field_json(const Field& F) {
  return {{"p", F.p()}, {"e", F.e()}, {"defining_poly", F.defining_poly()}};
}

json rep_json(const PElem& x) {
  auto k = x.key();
  return json::array({k[0], k[1], k[2], k[3]});
}

std::string rep_string(const PElem& x) {
  auto k = x.key();
  return "[" + std::to_string(k[0]) + "," + std::to_string(k[1]) + "," +
         std::to_string(k[2]) + "," + std::to_string(k[3]) + "]";
}

std::string field_banner(const Group& g) {
  return "PSL2(" + std::to_string(g.q()) + ")  p=" + std::to_string(g.p()) +
         " e=" + std::to_string(g.F().e()) + "  defining_poly " + poly_string(g.F()) +
         "  |G|=" + std::to_string(g.order);
}

// ---------------------------------------------------------------------------

struct Output {
  std::ostringstream buf;
  std::string path;  // empty: stdout

  int flush(std::ostream& out, std::ostream& err) {
    if (path.empty()) {
      out << buf.str();
      return 0;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      err << "cannot open output file: " << path << "\n";
      return 2;
    }
    f << buf.str();
    return 0;
  }
};

Group make_group(uint64_t q) {
  auto [p, e] = prime_power(q);
  return group_ctx(make_field(p, e));
}

void emit_classes(const Group& g, const std::vector<ClassRow>& rows,
                  const std::string& format, Output& o) {
  if (format == "json") {
    json classes = json::array();
    for (const auto& r : rows)
      classes.push_back({{"selector", r.selector},
                         {"kind", r.kind},
                         {"order", r.order},
                         {"size", r.size},
                         {"rep", rep_json(r.rep)}});
    json j{{"command", "classes"},
           {"q", g.q()},
           {"field", field_json(g.F())},
           {"result", {{"group_order", g.order}, {"classes", classes}}}};
    o.buf << j.dump(2) << "\n";
  } else if (format == "csv") {
    o.buf << "selector,kind,order,size,a,b,c,d\n";
    for (const auto& r : rows) {
      auto k = r.rep.key();
      o.buf << r.selector << "," << r.kind << "," << r.order << "," << r.size << "," << k[0]
            << "," << k[1] << "," << k[2] << "," << k[3] << "\n";
    }
  } else {
    o.buf << field_banner(g) << "\n";
    o.buf << "selector    kind       order  size   rep\n";
    for (const auto& r : rows) {
      char line[128];
      std::snprintf(line, sizeof line, "%-11s %-10s %-6llu %-6llu %s", r.selector.c_str(),
                    r.kind.c_str(), (unsigned long long)r.order, (unsigned long long)r.size,
                    rep_string(r.rep).c_str());
      o.buf << line << "\n";
    }
  }
}

void emit_square(const Group& g, const std::vector<ClassRow>& rows, const ClassId& id,
                 bool closed_form, const std::string& format, Output& o) {
  std::set<ClassId> square;
  std::string set_name;
  if (closed_form) {
    SetTag tag = class_square_closed(g, id);
    set_name = to_string(tag);
    square = expand_set_descr(g, tag);
  } else {
    GroupTable table = enumerate_group(g);
    square = class_square_brute(table, id);
  }
  uint64_t total = 0;
  std::vector<const ClassRow*> members;
  for (const auto& r : rows)
    if (square.count(r.id)) {
      members.push_back(&r);
      total += r.size;
    }
  std::string mode = closed_form ? "closed-form" : "brute";

  if (format == "json") {
    json classes = json::array();
    for (const ClassRow* r : members)
      classes.push_back({{"selector", r->selector},
                         {"kind", r->kind},
                         {"order", r->order},
                         {"size", r->size}});
    json result{{"classes", classes}, {"element_total", total}, {"mode", mode}};
    if (closed_form) result["set"] = set_name;
    json j{{"command", "square"},
           {"q", g.q()},
           {"class", class_selector(g, id)},
           {"field", field_json(g.F())},
           {"result", result}};
    o.buf << j.dump(2) << "\n";
  } else if (format == "csv") {
    o.buf << "selector,kind,order,size\n";
    for (const ClassRow* r : members)
      o.buf << r->selector << "," << r->kind << "," << r->order << "," << r->size << "\n";
  } else {
    o.buf << field_banner(g) << "\n";
    o.buf << "C^2 of class " << class_selector(g, id) << " (" << mode << ")";
    if (closed_form) o.buf << ": " << set_name;
    o.buf << "\n";
    for (const ClassRow* r : members)
      o.buf << "  " << r->selector << "  " << r->kind << "  ord " << r->order << "  size "
            << r->size << "\n";
    o.buf << "total elements: " << total << "\n";
  }
}

void emit_traces(const Group& g, uint64_t n, const std::string& format, Output& o) {
  auto ts = trace_set(g, n);
  if (format == "json") {
    json arr = json::array();
    for (FieldElem t : ts) arr.push_back(t.code);
    json j{{"command", "traces"},
           {"q", g.q()},
           {"n", n},
           {"field", field_json(g.F())},
           {"result", {{"traces", arr}}}};
    o.buf << j.dump(2) << "\n";
  } else {
    o.buf << field_banner(g) << "\n";
    o.buf << "traces of order-" << n << " elements:";
    if (ts.empty()) o.buf << " (none: no element of this order)";
    for (FieldElem t : ts) o.buf << " " << t.code;
    o.buf << "\n";
  }
}

std::vector<uint64_t> prime_powers_upto(uint64_t qmax) {
  std::vector<uint64_t> qs;
  for (uint64_t q = 2; q <= qmax; ++q) {
    try {
      prime_power(q);
      qs.push_back(q);
    } catch (const std::invalid_argument&) {
    }
  }
  return qs;
}

std::string join(const std::vector<uint64_t>& v) {
  if (v.empty()) return "--";
  std::string s;
  for (uint64_t n : v) {
    if (!s.empty()) s += ",";
    s += std::to_string(n);
  }
  return s;
}

void emit_table1(uint64_t qmax, const std::string& format, Output& o) {
  auto qs = prime_powers_upto(qmax);
  if (format == "json") {
    json rows = json::array();
    for (uint64_t q : qs) {
      OrdersRow r = orders_table(q);
      rows.push_back({{"q", r.q},
                      {"unipotent_order", r.unipotent_order},
                      {"good", r.minimal_good},
                      {"not_good", r.minimal_not_good}});
    }
    json j{{"command", "table1"}, {"qmax", qmax}, {"result", {{"rows", rows}}}};
    o.buf << j.dump(2) << "\n";
  } else {
    o.buf << "q | unipotent order | q-minimal good | q-minimal not good\n";
    for (uint64_t q : qs) {
      OrdersRow r = orders_table(q);
      o.buf << r.q << " | " << r.unipotent_order << " | " << join(r.minimal_good) << " | "
            << join(r.minimal_not_good) << "\n";
    }
  }
}

std::string absence_reason(const Group& g, const ClassId& id, uint64_t ord, bool pair) {
  if (pair) {
    if (ord == 2) return "a pair of involutions generates a dihedral subgroup, never the whole group";
    return "the unipotent classes of PSL2(9) admit no generating pair";
  }
  if (id.kind == ElemType::Unipotent)
    return "unipotent product-one triples exist only over prime fields (order-p triples live in PSL2(p))";
  if (ord <= 3)
    return "order-" + std::to_string(ord) +
           " product-one triples generate abelian or solvable groups";
  return "order " + std::to_string(ord) + " is not " + std::to_string(g.q()) +
         "-minimal: such triples live in a subfield subgroup";
}

void emit_certificate(const Group& g, const std::string& command, const ClassId& id,
                      const std::optional<GenCertificate>& cert, const std::string& reason,
                      const std::string& format, Output& o) {
  if (format == "json") {
    json result;
    result["present"] = cert.has_value();
    if (cert) {
      json elems = json::array();
      for (const PElem& x : cert->elements) elems.push_back(rep_json(x));
      result["elements"] = elems;
      result["closure_order"] = cert->closure_order;
      result["relation"] = cert->relation == CertRelation::Pair ? "pair" : "triple-product-1";
    } else {
      result["reason"] = reason;
    }
    json j{{"command", command},
           {"q", g.q()},
           {"class", class_selector(g, id)},
           {"field", field_json(g.F())},
           {"result", result}};
    o.buf << j.dump(2) << "\n";
  } else {
    o.buf << field_banner(g) << "\n";
    o.buf << command << " for class " << class_selector(g, id) << ": "
          << (cert ? "present" : "absent") << "\n";
    if (cert) {
      const char* names[3] = {"x", "y", "z"};
      for (size_t i = 0; i < cert->elements.size(); ++i)
        o.buf << "  " << names[i] << " = " << rep_string(cert->elements[i]) << "\n";
      if (cert->relation == CertRelation::TripleProductOne) o.buf << "  x*y*z = 1\n";
      o.buf << "  closure order " << cert->closure_order << "\n";
    } else {
      o.buf << "  reason: " << reason << "\n";
    }
  }
}

json verify_json(const VerifyReport& r) {
  json squares = json::array();
  for (const auto& s : r.squares) {
    json e{{"selector", s.selector},
           {"closed_form", s.closed_form},
           {"match", s.match},
           {"element_total", s.brute_cardinality}};
    if (!s.missing.empty()) e["missing"] = s.missing;
    if (!s.extra.empty()) e["extra"] = s.extra;
    squares.push_back(e);
  }
  json generation = json::array();
  for (const auto& c : r.generation) {
    json e{{"selector", c.selector},
           {"pair_expected", c.pair_expected},
           {"pair_found", c.pair_found},
           {"pair_ok", c.pair_ok},
           {"triple_expected", c.triple_expected},
           {"triple_found", c.triple_found},
           {"triple_ok", c.triple_ok}};
    if (!c.witness.empty()) e["witness"] = c.witness;
    generation.push_back(e);
  }
  return json{{"q", r.q},
              {"seed", r.seed},
              {"group_order", r.group_order},
              {"table1", r.table1_ok},
              {"trace_sets", r.trace_sets_ok},
              {"trace_counts", r.trace_counts_ok},
              {"element_counts", r.element_counts_ok},
              {"good_residue", r.good_residue_ok},
              {"squares", squares},
              {"squares_ok", r.squares_ok},
              {"square_cardinalities_ok", r.square_cardinalities_ok},
              {"epsilon", r.epsilon_observed},
              {"generation", generation},
              {"generation_ok", r.generation_ok},
              {"all_ok", r.all_ok()}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"conjugacy classes, class squares and generation certificates of PSL2(q)"};
  app.require_subcommand(1);

  Output output;
  app.add_option("--out", output.path, "write the output to a file instead of stdout");

  uint64_t q = 0, n = 0, qmax = 29, seed = 1, upto = 0;
  std::string format = "table", selector, elem;
  bool closed_form = false, unip_factors = false;

  auto add_format = [&](CLI::App* cmd) {
    cmd->fallthrough();  // top-level --out may follow the subcommand
    cmd->add_option("--format", format, "table, json or csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
  };

  auto* c_classes = app.add_subcommand("classes", "all conjugacy classes of PSL2(q)");
  c_classes->add_option("--q", q, "prime power")->required();
  add_format(c_classes);

  auto* c_square = app.add_subcommand("square", "the square C^2 of one class");
  c_square->add_option("--q", q, "prime power")->required();
  c_square->add_option("--class", selector, "class selector")->required();
  c_square->add_flag("--closed-form", closed_form, "use the closed form instead of brute force");
  add_format(c_square);

  auto* c_traces = app.add_subcommand("traces", "trace set of the order-n elements");
  c_traces->add_option("--q", q, "prime power")->required();
  c_traces->add_option("--n", n, "element order, n > 1")->required();
  add_format(c_traces);

  auto* c_table1 = app.add_subcommand("table1", "q-minimal orders, good and not, per q");
  c_table1->add_option("--qmax", qmax, "largest q (default 29)");
  add_format(c_table1);

  auto* c_pair = app.add_subcommand("gen-pair", "generating pair inside one class");
  c_pair->add_option("--q", q, "prime power")->required();
  c_pair->add_option("--class", selector, "class selector")->required();
  c_pair->add_option("--seed", seed, "seed for the randomized fallback");
  add_format(c_pair);

  auto* c_triple = app.add_subcommand("gen-triple", "product-one generating triple inside one class");
  c_triple->add_option("--q", q, "prime power")->required();
  c_triple->add_option("--class", selector, "class selector")->required();
  c_triple->add_option("--seed", seed, "seed for the randomized fallback");
  add_format(c_triple);

  auto* c_factor = app.add_subcommand("factor", "factor an element into two conjugate generators");
  c_factor->add_option("--q", q, "prime power")->required();
  c_factor->add_option("--elem", elem, "element as a,b,c,d entry encodings")->required();
  c_factor->add_flag("--unipotent-factors", unip_factors, "require unipotent factors");
  c_factor->add_option("--seed", seed, "seed");
  add_format(c_factor);

  auto* c_verify = app.add_subcommand("verify", "reconcile every closed form against brute force");
  auto* vq = c_verify->add_option("--q", q, "one prime power");
  auto* vu = c_verify->add_option("--all-q-upto", upto, "all prime powers up to this bound");
  vq->excludes(vu);
  c_verify->add_option("--seed", seed, "seed");
  add_format(c_verify);

  std::vector<const char*> argv;
  argv.push_back("psl2q");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse((int)argv.size(), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  int rc = 0;
  try {
    if (c_classes->parsed()) {
      Group g = make_group(q);
      emit_classes(g, class_rows(g), format, output);
    } else if (c_square->parsed()) {
      Group g = make_group(q);
      auto rows = class_rows(g);
      ClassId id = resolve_selector(g, rows, selector);
      if (id.kind == ElemType::Identity)
        throw std::invalid_argument("the identity class has no stated square");
      emit_square(g, rows, id, closed_form, format, output);
    } else if (c_traces->parsed()) {
      Group g = make_group(q);
      emit_traces(g, n, format, output);
    } else if (c_table1->parsed()) {
      emit_table1(qmax, format, output);
    } else if (c_pair->parsed() || c_triple->parsed()) {
      Group g = make_group(q);
      auto rows = class_rows(g);
      ClassId id = resolve_selector(g, rows, selector);
      bool pair = c_pair->parsed();
      auto cert = pair ? generating_pair_in_class(g, id, seed)
                       : generating_triple_in_class(g, id, seed);
      std::string reason;
      if (!cert) reason = absence_reason(g, id, class_order(g, id), pair);
      emit_certificate(g, pair ? "gen-pair" : "gen-triple", id, cert, reason, format, output);
    } else if (c_factor->parsed()) {
      Group g = make_group(q);
      std::array<uint64_t, 4> codes{};
      {
        std::istringstream is(elem);
        std::string tok;
        size_t i = 0;
        while (std::getline(is, tok, ',') && i < 4) codes[i++] = std::stoull(tok);
        if (i != 4) throw std::invalid_argument("--elem wants four comma-separated encodings");
      }
      const Field& F = g.F();
      for (uint64_t c : codes)
        if (c >= F.q()) throw std::invalid_argument("entry encoding out of range");
      Mat2 m = Mat2::from(F.from_code(codes[0]), F.from_code(codes[1]), F.from_code(codes[2]),
                          F.from_code(codes[3]));
      PElem z = canon(m);
      if (is_identity(z)) throw std::invalid_argument("the identity element does not factor");
      auto cert = product_of_conjugate_generators(g, z, unip_factors, seed);
      std::string reason;
      if (!cert)
        reason = unip_factors
                     ? "no pair of conjugate generating unipotents multiplies to this element"
                     : "no pair of conjugate generating elements multiplies to this element";
      emit_certificate(g, "factor", class_id(g, z), cert, reason, format, output);
      if (cert && format == "table")
        output.buf << "  product = " << rep_string(mul(cert->elements[0], cert->elements[1]))
                   << "\n";
    } else if (c_verify->parsed()) {
      std::vector<uint64_t> qs;
      if (*vq) qs.push_back(q);
      else if (*vu) qs = prime_powers_upto(upto);
      else throw std::invalid_argument("verify wants --q or --all-q-upto");
      bool all_ok = true;
      json reports = json::array();
      for (uint64_t qq : qs) {
        VerifyReport rep = verify_all(qq, seed);
        all_ok = all_ok && rep.all_ok();
        if (format == "json") reports.push_back(verify_json(rep));
        else output.buf << rep.to_text();
      }
      if (format == "json") {
        json j{{"command", "verify"}, {"seed", seed}, {"result", {{"reports", reports}, {"all_ok", all_ok}}}};
        output.buf << j.dump(2) << "\n";
      } else {
        output.buf << (all_ok ? "verify: ALL OK" : "verify: MISMATCH") << "\n";
      }
      if (!all_ok) rc = 1;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }

  int frc = output.flush(out, err);
  return frc != 0 ? frc : rc;
}

}  // namespace psl2q::cli

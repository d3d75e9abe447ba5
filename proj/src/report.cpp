#include "hh/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hh/errors.hpp"

namespace hh {

Json Json::null() { return Json(); }

Json Json::boolean(bool b) {
  Json j;
  j.type_ = Type::bool_t;
  j.b_ = b;
  return j;
}

Json Json::number(double v) {
  Json j;
  j.type_ = Type::num_t;
  j.num_ = v;
  return j;
}

Json Json::integer(long long v) {
  Json j;
  j.type_ = Type::int_t;
  j.int_ = v;
  return j;
}

Json Json::string(std::string s) {
  Json j;
  j.type_ = Type::str_t;
  j.str_ = std::move(s);
  return j;
}

Json Json::array() {
  Json j;
  j.type_ = Type::arr_t;
  return j;
}

Json Json::object() {
  Json j;
  j.type_ = Type::obj_t;
  return j;
}

Json& Json::push(Json v) {
  arr_.push_back(std::move(v));
  return *this;
}

Json& Json::set(const std::string& key, Json v) {
  obj_.emplace_back(key, std::move(v));
  return *this;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace

void Json::write(std::string& out, int depth) const {
  const std::string pad(static_cast<size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<size_t>(depth + 1) * 2, ' ');
  switch (type_) {
    case Type::null_t:
      out += "null";
      return;
    case Type::bool_t:
      out += b_ ? "true" : "false";
      return;
    case Type::num_t:
      out += format_number(num_);
      return;
    case Type::int_t:
      out += std::to_string(int_);
      return;
    case Type::str_t:
      write_escaped(out, str_);
      return;
    case Type::arr_t: {
      if (arr_.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < arr_.size(); ++i) {
        out += pad_in;
        arr_[i].write(out, depth + 1);
        if (i + 1 < arr_.size()) out += ',';
        out += '\n';
      }
      out += pad + "]";
      return;
    }
    case Type::obj_t: {
      if (obj_.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      for (size_t i = 0; i < obj_.size(); ++i) {
        out += pad_in;
        write_escaped(out, obj_[i].first);
        out += ": ";
        obj_[i].second.write(out, depth + 1);
        if (i + 1 < obj_.size()) out += ',';
        out += '\n';
      }
      out += pad + "}";
      return;
    }
  }
}

std::string Json::dump() const {
  std::string out;
  write(out, 0);
  out += '\n';
  return out;
}

Json json_point(const Point& p) {
  Json a = Json::array();
  for (const cplx& c : p) {
    if (c.imag() == 0.0) {
      a.push(Json::number(c.real()));
    } else {
      Json pair = Json::array();
      pair.push(Json::number(c.real()));
      pair.push(Json::number(c.imag()));
      a.push(std::move(pair));
    }
  }
  return a;
}

Json json_params(const Params& p) {
  Json o = Json::object();
  for (const auto& [k, v] : p) {
    if (v.imag() == 0.0) {
      o.set(k, Json::number(v.real()));
    } else {
      Json pair = Json::array();
      pair.push(Json::number(v.real()));
      pair.push(Json::number(v.imag()));
      o.set(k, std::move(pair));
    }
  }
  return o;
}

Json json_checks(const std::vector<Check>& checks) {
  Json a = Json::array();
  for (const Check& c : checks) {
    Json o = Json::object();
    o.set("name", Json::string(c.name));
    o.set("value", Json::number(c.value));
    o.set("tol", Json::number(c.tol));
    o.set("pass", Json::boolean(c.pass));
    o.set("worst_point", c.worst_point ? json_point(*c.worst_point) : Json::null());
    a.push(std::move(o));
  }
  return a;
}

Json verify_report(const VerifyResult& r, const std::string& command) {
  Json o = Json::object();
  o.set("schema", Json::integer(1));
  o.set("command", Json::string(command));
  o.set("family", Json::string(r.family));
  o.set("params", json_params(r.params));
  o.set("points_evaluated", Json::integer(r.points_evaluated));
  if (r.kappa != 0.0) o.set("kappa", Json::number(r.kappa));
  o.set("checks", json_checks(r.checks));
  o.set("pass", Json::boolean(r.pass));
  return o;
}

// ---------------------------------------------------------------------------
// Family files
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

Box parse_box(const json& jb) {
  if (!jb.is_array() || jb.size() != 4) throw ConfigError("box must be four [lo, hi] pairs");
  Box box{};
  for (size_t d = 0; d < 4; ++d) {
    box[d][0] = jb[d][0].get<double>();
    box[d][1] = jb[d][1].get<double>();
  }
  return box;
}

}  // namespace

Instantiation load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open family file " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("bad family file " + path + ": " + e.what());
  }

  Instantiation inst;
  inst.record.id = j.value("id", std::string("user_family"));
  const std::string formalism = j.value("formalism", std::string());

  Params params;
  if (j.contains("params"))
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
      params[it.key()] = cplx(it.value().get<double>());
  if (!params.count("Lambda")) params["Lambda"] = 3.0;
  if (!params.count("tau")) params["tau"] = 1.0;
  inst.record.params = params;

  const auto payload_text = [&](const std::string& key) -> std::string {
    if (!j.contains("payload") || !j["payload"].contains(key))
      throw ConfigError("family file lacks payload." + key);
    return j["payload"][key].get<std::string>();
  };

  if (formalism == "W") {
    inst.record.formalism = Formalism::W;
    WData w;
    w.W = parse_expr(payload_text("W"), w_chart().names);
    w.tau = params["tau"];
    w.lambda = params["Lambda"];
    inst.w = w;
    inst.metric = build_w_metric(w);
  } else if (formalism == "Sigma") {
    inst.record.formalism = Formalism::Sigma;
    SigmaData s;
    s.Sigma = parse_expr(payload_text("Sigma"), sigma_chart().names);
    s.tau = params["tau"];
    s.lambda = params["Lambda"];
    inst.sigma = s;
    inst.metric = build_sigma_metric(s);
  } else if (formalism == "U") {
    inst.record.formalism = Formalism::U;
    const auto names = u_chart().names;
    const Expr U = parse_expr(payload_text("U"), names);
    std::array<Expr, 4> alpha = {Expr::constant(0.0), Expr::constant(0.0), Expr::constant(0.0),
                                 Expr::constant(0.0)};
    if (j.contains("payload")) {
      const auto grab = [&](const char* key, int slot) {
        if (j["payload"].contains(key))
          alpha[static_cast<size_t>(slot)] =
              parse_expr(j["payload"][key].get<std::string>(), names);
      };
      grab("alpha_T", 0);
      grab("alpha_X", 1);
      grab("alpha_Y", 2);
    }
    UData u = make_u_data(U, alpha, params["Lambda"]);
    inst.u = u;
    inst.metric = build_u_metric(u);
  } else {
    throw ConfigError("formalism must be W, Sigma or U (got \"" + formalism + "\")");
  }
  inst.metric.params = params;

  if (j.contains("box")) {
    inst.record.box = parse_box(j["box"]);
  } else {
    throw ConfigError("family file needs a box (four [lo, hi] pairs)");
  }

  ExpectedBlock& e = inst.record.expected;
  if (j.contains("expected")) {
    const json& je = j["expected"];
    e.einstein = je.value("einstein", true);
    e.sd_weyl_zero = je.value("sd_weyl_zero", false);
    e.full_weyl_zero = je.value("full_weyl_zero", false);
    e.asd_weyl_nonzero = je.value("asd_weyl_nonzero", false);
    e.lambda_eff_factor = je.value("lambda_eff_factor", 1.0);
  } else {
    e.sd_weyl_zero = true;
  }

  if (j.contains("payload"))
    for (auto it = j["payload"].begin(); it != j["payload"].end(); ++it)
      inst.record.payload_echo.emplace_back(it.key(), it.value().get<std::string>());
  return inst;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

}  // namespace hh

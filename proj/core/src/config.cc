// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "biaslens/error.h"
#include "biaslens/io.h"
#include "biaslens/text.h"

namespace biaslens::config {

Value Value::of(bool v) {
  Value x;
  x.type = Type::kBool;
  x.b = v;
  return x;
}

Value Value::of(std::int64_t v) {
  Value x;
  x.type = Type::kInt;
  x.i = v;
  return x;
}

Value Value::of(double v) {
  Value x;
  x.type = Type::kFloat;
  x.f = v;
  return x;
}

Value Value::of(std::string v) {
  Value x;
  x.type = Type::kString;
  x.s = std::move(v);
  return x;
}

Value Value::of(std::vector<Value> v) {
  Value x;
  x.type = Type::kArray;
  x.items = std::move(v);
  return x;
}

std::string_view type_name(Value::Type type) {
  switch (type) {
    case Value::Type::kBool: return "boolean";
    case Value::Type::kInt: return "integer";
    case Value::Type::kFloat: return "float";
    case Value::Type::kString: return "string";
    case Value::Type::kArray: return "array";
  }
  return "?";
}

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string float_text(double v) {
  std::string s = io::format_double(v);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t number) : s_(line), line_(number) {}

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::kFormatError, "config line " + std::to_string(line_) + ": " + why);
  }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_space();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string name(bool dotted) {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (is_key_char(s_[pos_]) || (dotted && s_[pos_] == '.'))) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  Value value(bool allow_array) {
    skip_space();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"') return Value::of(basic_string());
    if (c == '\'') return Value::of(literal_string());
    if (c == '[') {
      if (!allow_array) fail("nested arrays are not supported");
      ++pos_;
      std::vector<Value> items;
      while (!eat(']')) {
        items.push_back(value(false));
        if (!eat(',')) {
          if (!eat(']')) fail("expected ',' or ']' in array");
          break;
        }
      }
      return Value::of(std::move(items));
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#') {
      ++pos_;
    }
    const std::string_view tok = s_.substr(start, pos_ - start);
    if (tok == "true") return Value::of(true);
    if (tok == "false") return Value::of(false);
    if (tok.find_first_of(".eE") == std::string_view::npos) {
      std::int64_t v = 0;
      auto body = tok.starts_with('+') ? tok.substr(1) : tok;
      auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
      if (ec == std::errc() && ptr == body.data() + body.size() && !body.empty()) {
        return Value::of(v);
      }
    } else {
      double v = 0.0;
      auto body = tok.starts_with('+') ? tok.substr(1) : tok;
      auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
      if (ec == std::errc() && ptr == body.data() + body.size() && std::isfinite(v)) {
        return Value::of(v);
      }
    }
    fail("cannot parse value '" + std::string(tok) + "'");
  }

 private:
  std::string basic_string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        switch (s_[pos_++]) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: fail("unknown escape in string");
        }
      } else {
        out += c;
      }
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::string literal_string() {
    ++pos_;
    const std::size_t end = s_.find('\'', pos_);
    if (end == std::string_view::npos) fail("unterminated string");
    std::string out(s_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Value::to_text() const {
  switch (type) {
    case Type::kBool: return b ? "true" : "false";
    case Type::kInt: return std::to_string(i);
    case Type::kFloat: return float_text(f);
    case Type::kString: return quote(s);
    case Type::kArray: {
      std::string out = "[";
      for (std::size_t k = 0; k < items.size(); ++k) {
        if (k) out += ", ";
        out += items[k].to_text();
      }
      return out + "]";
    }
  }
  return "";
}

Document Document::parse(std::string_view content) {
  Document doc;
  std::string section;
  std::size_t number = 0;
  for (std::string_view raw : io::lines(content)) {
    ++number;
    if (number == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.remove_prefix(3);
    LineParser p(raw, number);
    if (p.at_end_or_comment()) continue;
    if (p.eat('[')) {
      section = p.name(true);
      if (!p.eat(']')) p.fail("expected ']'");
      if (!p.at_end_or_comment()) p.fail("unexpected text after section header");
      continue;
    }
    const std::string key = p.name(false);
    if (!p.eat('=')) p.fail("expected '='");
    Value v = p.value(true);
    if (!p.at_end_or_comment()) p.fail("unexpected text after value");
    const std::string full = section.empty() ? key : section + "." + key;
    if (!doc.entries_.emplace(full, std::move(v)).second) p.fail("duplicate key '" + full + "'");
  }
  return doc;
}

const Value* Document::find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string Document::to_text() const {
  std::map<std::string, std::vector<std::pair<std::string, const Value*>>> sections;
  for (const auto& [key, value] : entries_) {
    const auto dot = key.rfind('.');
    if (dot == std::string::npos) {
      sections[""].emplace_back(key, &value);
    } else {
      sections[key.substr(0, dot)].emplace_back(key.substr(dot + 1), &value);
    }
  }
  std::string out;
  for (const auto& [name, entries] : sections) {
    if (!name.empty()) out += (out.empty() ? "[" : "\n[") + name + "]\n";
    for (const auto& [key, value] : entries) out += key + " = " + value->to_text() + "\n";
  }
  return out;
}

// ---- RunConfig -------------------------------------------------------------

RunConfig::RunConfig() : algorithms(recsys::all_kinds()) {}

std::vector<recsys::AlgorithmSpec> RunConfig::specs() const {
  std::vector<recsys::AlgorithmSpec> out;
  for (recsys::Kind kind : algorithms) {
    auto o = overrides.find(kind);
    auto s = algorithm_seeds.find(kind);
    out.emplace_back(kind, o == overrides.end() ? recsys::Hyperparams{} : o->second,
                     s == algorithm_seeds.end() ? seed : s->second);
  }
  return out;
}

std::vector<recsys::Kind> parse_kind_list(std::string_view list) {
  std::vector<recsys::Kind> out;
  for (std::string_view part : text::split(list, ',')) {
    const std::string name(text::trim(part));
    if (name.empty()) continue;
    const auto kind = recsys::parse_kind(name);
    if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + name + "'");
    if (std::find(out.begin(), out.end(), *kind) != out.end()) {
      throw Error(ErrorCode::kInvalidArgument, "algorithm '" + name + "' listed twice");
    }
    out.push_back(*kind);
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "empty algorithm list");
  return out;
}

namespace {

class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  const Value* take(const std::string& key, Value::Type type) {
    const Value* v = doc_.find(key);
    if (!v) return nullptr;
    used_.insert(key);
    const bool ok = v->type == type || (type == Value::Type::kFloat && v->type == Value::Type::kInt);
    if (!ok) {
      throw Error(ErrorCode::kFormatError, "config key '" + key + "' must be a " +
                                               std::string(type_name(type)) + ", got " +
                                               std::string(type_name(v->type)));
    }
    return v;
  }

  void str(const std::string& key, std::string& out) {
    if (auto v = take(key, Value::Type::kString)) out = v->s;
  }
  void boolean(const std::string& key, bool& out) {
    if (auto v = take(key, Value::Type::kBool)) out = v->b;
  }
  void real(const std::string& key, double& out) {
    if (auto v = take(key, Value::Type::kFloat)) out = v->type == Value::Type::kInt ? v->i : v->f;
  }
  template <class T>
  void integer(const std::string& key, T& out) {
    if (auto v = take(key, Value::Type::kInt)) {
      if (v->i < 0 && std::is_unsigned_v<T>) {
        throw Error(ErrorCode::kFormatError, "config key '" + key + "' must be >= 0");
      }
      out = static_cast<T>(v->i);
    }
  }

  void mark_used(const std::string& key) { used_.insert(key); }

  void reject_unknown() const {
    for (const auto& [key, value] : doc_.entries()) {
      if (!used_.contains(key)) {
        throw Error(ErrorCode::kFormatError, "unknown config key '" + key + "'");
      }
    }
  }

 private:
  const Document& doc_;
  std::set<std::string> used_;
};

template <class Enum>
Enum parse_enum(std::string_view key, std::string_view value,
                std::initializer_list<std::pair<std::string_view, Enum>> options) {
  std::string folded = text::fold(value);
  std::erase(folded, ' ');
  std::string valid;
  for (const auto& [name, e] : options) {
    std::string n = text::fold(name);
    std::erase(n, ' ');
    if (n == folded) return e;
    valid += (valid.empty() ? "" : ", ") + std::string(name);
  }
  throw Error(ErrorCode::kFormatError, "config key '" + std::string(key) + "': '" +
                                           std::string(value) + "' is not one of " + valid);
}

}  // namespace

RunConfig parse_run_config(std::string_view content) {
  const Document doc = Document::parse(content);
  Reader r(doc);
  RunConfig c;

  r.str("data.format", c.format);
  if (c.format != "bookcrossing" && c.format != "generic") {
    throw Error(ErrorCode::kFormatError, "data.format must be 'bookcrossing' or 'generic'");
  }
  r.str("data.ratings", c.ratings);
  r.str("data.items", c.items);
  r.str("data.users", c.users);
  r.str("data.catalog", c.catalog);
  std::string encoding = "latin1";
  r.str("data.encoding", encoding);
  c.encoding = parse_enum<ingest::Encoding>(
      "data.encoding", encoding, {{"latin1", ingest::Encoding::kLatin1}, {"utf8", ingest::Encoding::kUtf8}});

  r.boolean("preprocess.drop_implicit", c.preprocess.drop_implicit);
  r.integer("preprocess.max_user_ratings", c.preprocess.max_user_ratings);
  r.integer("preprocess.min_user_ratings", c.preprocess.min_user_ratings);
  r.integer("preprocess.min_item_ratings", c.preprocess.min_item_ratings);
  r.boolean("preprocess.iterate_to_fixpoint", c.preprocess.iterate_to_fixpoint);
  c.preprocess.validate();

  r.str("link.isbn_authors", c.isbn_authors);
  r.str("link.viaf", c.viaf);
  r.str("link.wikidata", c.wikidata);
  std::string mode(linker::name_match_mode_name(c.link.name_match_mode));
  r.str("link.name_match_mode", mode);
  c.link.name_match_mode = parse_enum<linker::NameMatchMode>(
      "link.name_match_mode", mode,
      {{"ExactNormalized", linker::NameMatchMode::kExactNormalized},
       {"exact", linker::NameMatchMode::kExactNormalized},
       {"TokenSet", linker::NameMatchMode::kTokenSet},
       {"Levenshtein", linker::NameMatchMode::kLevenshtein}});
  r.integer("link.levenshtein_max_distance", c.link.levenshtein_max_distance);
  std::string policy(linker::citizenship_policy_name(c.link.multi_citizenship_policy));
  r.str("link.multi_citizenship_policy", policy);
  c.link.multi_citizenship_policy = parse_enum<linker::CitizenshipPolicy>(
      "link.multi_citizenship_policy", policy,
      {{"All", linker::CitizenshipPolicy::kAll}, {"First", linker::CitizenshipPolicy::kFirst}});
  c.link.validate();

  if (const Value* list = r.take("audit.algorithms", Value::Type::kArray)) {
    std::string joined;
    for (const Value& v : list->items) {
      if (v.type != Value::Type::kString) {
        throw Error(ErrorCode::kFormatError, "audit.algorithms must list strings");
      }
      joined += v.s + ",";
    }
    c.algorithms = parse_kind_list(joined);
  }
  r.real("audit.split_ratio", c.split_ratio);
  r.integer("audit.split_seed", c.split_seed);
  r.boolean("audit.stratified", c.stratified);
  r.integer("audit.seed", c.seed);
  r.integer("audit.k", c.k);
  if (c.k < 1) throw Error(ErrorCode::kFormatError, "audit.k must be >= 1");
  r.str("audit.target_country", c.target_country);
  std::string unknown(audit::unknown_policy_name(c.unknown_policy));
  r.str("audit.unknown_policy", unknown);
  c.unknown_policy = parse_enum<audit::UnknownPolicy>(
      "audit.unknown_policy", unknown,
      {{"Exclude", audit::UnknownPolicy::kExclude}, {"CountAsNo", audit::UnknownPolicy::kCountAsNo}});
  r.boolean("audit.strict", c.strict);
  if (!(c.split_ratio > 0.0 && c.split_ratio <= 1.0)) {
    throw Error(ErrorCode::kFormatError, "audit.split_ratio must be in (0, 1]");
  }

  for (const auto& [key, value] : doc.entries()) {
    if (!key.starts_with("algorithm.")) continue;
    const std::string rest = key.substr(std::string_view("algorithm.").size());
    const auto dot = rest.find('.');
    if (dot == std::string::npos) {
      throw Error(ErrorCode::kFormatError, "config key '" + key + "' needs an [algorithm.<Kind>] section");
    }
    const auto kind = recsys::parse_kind(rest.substr(0, dot));
    if (!kind) {
      throw Error(ErrorCode::kFormatError, "unknown algorithm section '" + rest.substr(0, dot) + "'");
    }
    const std::string param = rest.substr(dot + 1);
    if (param == "seed") {
      std::uint64_t s = 0;
      r.integer(key, s);
      c.algorithm_seeds[*kind] = s;
    } else {
      double v = 0.0;
      r.real(key, v);
      c.overrides[*kind][param] = v;
    }
  }
  for (const auto& [kind, hp] : c.overrides) recsys::AlgorithmSpec(kind, hp, 0);

  r.integer("synth.users", c.synth.n_users);
  r.integer("synth.items", c.synth.n_items);
  r.real("synth.zipf", c.synth.zipf_s);
  r.real("synth.target_fraction", c.synth.target_fraction);
  r.real("synth.bias", c.synth.bias_strength);
  r.integer("synth.seed", c.synth.seed);
  r.str("synth.target_country", c.synth.target_country);
  c.synth.validate();

  r.str("output.dir", c.output_dir);
  r.reject_unknown();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(io::read_file(path));
}

Document to_document(const RunConfig& c) {
  Document d;
  auto s = [&](const std::string& k, const std::string& v) { d.set(k, Value::of(v)); };
  auto i = [&](const std::string& k, auto v) { d.set(k, Value::of(static_cast<std::int64_t>(v))); };
  auto f = [&](const std::string& k, double v) { d.set(k, Value::of(v)); };
  auto b = [&](const std::string& k, bool v) { d.set(k, Value::of(v)); };

  s("data.format", c.format);
  s("data.ratings", c.ratings);
  s("data.items", c.items);
  s("data.users", c.users);
  s("data.catalog", c.catalog);
  s("data.encoding", c.encoding == ingest::Encoding::kLatin1 ? "latin1" : "utf8");

  b("preprocess.drop_implicit", c.preprocess.drop_implicit);
  i("preprocess.max_user_ratings", c.preprocess.max_user_ratings);
  i("preprocess.min_user_ratings", c.preprocess.min_user_ratings);
  i("preprocess.min_item_ratings", c.preprocess.min_item_ratings);
  b("preprocess.iterate_to_fixpoint", c.preprocess.iterate_to_fixpoint);

  s("link.isbn_authors", c.isbn_authors);
  s("link.viaf", c.viaf);
  s("link.wikidata", c.wikidata);
  s("link.name_match_mode", std::string(linker::name_match_mode_name(c.link.name_match_mode)));
  i("link.levenshtein_max_distance", c.link.levenshtein_max_distance);
  s("link.multi_citizenship_policy",
    std::string(linker::citizenship_policy_name(c.link.multi_citizenship_policy)));

  std::vector<Value> kinds;
  for (auto kind : c.algorithms) kinds.push_back(Value::of(std::string(recsys::kind_name(kind))));
  d.set("audit.algorithms", Value::of(std::move(kinds)));
  f("audit.split_ratio", c.split_ratio);
  i("audit.split_seed", c.split_seed);
  b("audit.stratified", c.stratified);
  i("audit.seed", c.seed);
  i("audit.k", c.k);
  s("audit.target_country", c.target_country);
  s("audit.unknown_policy", std::string(audit::unknown_policy_name(c.unknown_policy)));
  b("audit.strict", c.strict);

  for (const auto& spec : c.specs()) {
    const std::string section = "algorithm." + std::string(recsys::kind_name(spec.kind())) + ".";
    i(section + "seed", spec.seed());
    for (const auto& [key, value] : spec.hyperparams()) {
      if (value == std::floor(value) && std::abs(value) < 1e15) {
        i(section + key, value);
      } else {
        f(section + key, value);
      }
    }
  }

  i("synth.users", c.synth.n_users);
  i("synth.items", c.synth.n_items);
  f("synth.zipf", c.synth.zipf_s);
  f("synth.target_fraction", c.synth.target_fraction);
  f("synth.bias", c.synth.bias_strength);
  i("synth.seed", c.synth.seed);
  s("synth.target_country", c.synth.target_country);

  s("output.dir", c.output_dir);
  return d;
}

std::string run_config_to_text(const RunConfig& c) {
  return "# Effective configuration; every default resolved.\n" + to_document(c).to_text();
}

}  // namespace biaslens::config

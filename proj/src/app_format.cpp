// SPDX-License-Identifier: Apache-2.0

#include "storyboard/app_format.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "storyboard/validate.hpp"

namespace storyboard {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("syntax error at " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {
const char* kind_name(ModelError::Kind k) {
  switch (k) {
    case ModelError::Kind::Reference: return "reference error";
    case ModelError::Kind::Duplicate: return "duplicate-name error";
    case ModelError::Kind::Invariant: return "invariant violation";
  }
  return "error";
}
}  // namespace

ModelError::ModelError(Kind kind, std::string path, const std::string& message)
    : std::runtime_error(std::string(kind_name(kind)) + " at " + path + ": " + message),
      kind_(kind),
      path_(std::move(path)) {}

namespace {

struct Token {
  std::string text;
  int column = 1;
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++number;

    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      char c = raw[i];
      if (c == ' ' || c == '\t') {
        ++i;
        continue;
      }
      if (c == '#') break;
      Token tok;
      tok.column = static_cast<int>(i) + 1;
      bool quoted = false;
      int quote_col = 0;
      while (i < raw.size()) {
        c = raw[i];
        if (quoted) {
          if (c == '\\' && i + 1 < raw.size()) {
            tok.text += raw[i + 1];
            i += 2;
            continue;
          }
          if (c == '"') {
            quoted = false;
            ++i;
            continue;
          }
          tok.text += c;
          ++i;
        } else {
          if (c == ' ' || c == '\t') break;
          if (c == '"') {
            quoted = true;
            quote_col = static_cast<int>(i) + 1;
            ++i;
            continue;
          }
          tok.text += c;
          ++i;
        }
      }
      if (quoted) throw ParseError(number, quote_col, "unterminated string");
      line.tokens.push_back(std::move(tok));
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return lines;
}

class Parser {
 public:
  explicit Parser(std::vector<Line> lines) : lines_(std::move(lines)) {}

  AppModel run() {
    AppModel model;
    bool saw_app = false;
    bool saw_manifest = false;
    bool saw_runtime = false;
    while (!at_end()) {
      const Line& l = next();
      const std::string& verb = l.tokens[0].text;
      if (verb == "app") {
        if (saw_app) fail(l, 0, "duplicate 'app' header");
        saw_app = true;
        parse_app_header(l, model);
      } else if (verb == "manifest") {
        if (saw_manifest) fail(l, 0, "duplicate 'manifest' section");
        saw_manifest = true;
        expect_arity(l, 1, 1);
        parse_manifest(model.manifest);
      } else if (verb == "unit") {
        model.units.push_back(parse_unit(l));
      } else if (verb == "layout") {
        expect_arity(l, 2, 2);
        std::string id = l.tokens[1].text;
        if (model.layouts.count(id))
          throw ModelError(ModelError::Kind::Duplicate, "layout/" + id,
                           "layout '" + id + "' defined twice");
        model.layouts.emplace(id, parse_layout(id));
      } else if (verb == "runtime") {
        if (saw_runtime) fail(l, 0, "duplicate 'runtime' section");
        saw_runtime = true;
        expect_arity(l, 1, 1);
        parse_runtime(model.runtime);
      } else {
        fail(l, 0, "unknown section '" + verb + "'");
      }
    }
    if (!saw_app) throw ParseError(1, 1, "missing 'app' header");
    if (!saw_manifest) throw ParseError(1, 1, "missing 'manifest' section");
    return model;
  }

  std::pair<std::string, LayoutTree> layout_only() {
    if (at_end()) throw ParseError(1, 1, "expected a layout block");
    const Line& l = next();
    if (l.tokens[0].text != "layout") fail(l, 0, "expected 'layout'");
    expect_arity(l, 2, 2);
    std::string id = l.tokens[1].text;
    LayoutTree tree = parse_layout(id);
    if (!at_end()) fail(lines_[pos_], 0, "trailing content after layout block");
    return {id, std::move(tree)};
  }

 private:
  bool at_end() const { return pos_ >= lines_.size(); }
  const Line& next() { return lines_[pos_++]; }

  [[noreturn]] void fail(const Line& l, std::size_t tok, const std::string& msg) const {
    int col = tok < l.tokens.size() ? l.tokens[tok].column : 1;
    throw ParseError(l.number, col, msg);
  }

  void expect_arity(const Line& l, std::size_t min, std::size_t max) const {
    if (l.tokens.size() < min)
      fail(l, l.tokens.size() - 1, "'" + l.tokens[0].text + "' expects more arguments");
    if (l.tokens.size() > max) fail(l, max, "unexpected argument '" + l.tokens[max].text + "'");
  }

  // Reads lines until 'end', handing each to `body`.
  template <typename F>
  void block(const Line& opener, F&& body) {
    while (true) {
      if (at_end())
        throw ParseError(opener.number, opener.tokens[0].column,
                         "'" + opener.tokens[0].text + "' block is missing 'end'");
      const Line& l = next();
      if (l.tokens[0].text == "end") {
        expect_arity(l, 1, 1);
        return;
      }
      body(l);
    }
  }

  static std::pair<std::string, std::string> split_attr(const std::string& tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) return {tok, {}};
    return {tok.substr(0, eq), tok.substr(eq + 1)};
  }

  int parse_int(const Line& l, std::size_t tok, std::string_view s) const {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
      fail(l, tok, "expected integer, got '" + std::string(s) + "'");
    return value;
  }

  void parse_app_header(const Line& l, AppModel& model) {
    expect_arity(l, 2, 3);
    model.package_id = l.tokens[1].text;
    if (l.tokens.size() == 3) {
      auto [k, v] = split_attr(l.tokens[2].text);
      if (k != "revision") fail(l, 2, "unknown app attribute '" + k + "'");
      model.revision = parse_int(l, 2, v);
    }
  }

  void parse_filter_attrs(const Line& l, std::size_t from, IntentFilter& f) const {
    for (std::size_t i = from; i < l.tokens.size(); ++i) {
      auto [k, v] = split_attr(l.tokens[i].text);
      if (v.empty()) fail(l, i, "filter attribute '" + k + "' needs a value");
      if (k == "action") {
        if (f.action) fail(l, i, "repeated action");
        f.action = v;
      } else if (k == "category") {
        f.categories.insert(v);
      } else if (k == "data") {
        if (f.data) fail(l, i, "repeated data");
        f.data = v;
      } else if (k == "mime") {
        if (f.mime_type) fail(l, i, "repeated mime");
        f.mime_type = v;
      } else {
        fail(l, i, "unknown filter attribute '" + k + "'");
      }
    }
  }

  void parse_manifest(Manifest& manifest) {
    const Line& opener = lines_[pos_ - 1];
    block(opener, [&](const Line& l) {
      const std::string& verb = l.tokens[0].text;
      if (verb == "activity") {
        expect_arity(l, 2, 4);
        ActivityDecl decl;
        decl.name = l.tokens[1].text;
        for (std::size_t i = 2; i < l.tokens.size(); ++i) {
          if (l.tokens[i].text == "launcher")
            decl.is_launcher = true;
          else if (l.tokens[i].text == "exported")
            decl.exported = true;
          else
            fail(l, i, "unknown activity flag '" + l.tokens[i].text + "'");
        }
        manifest.declared_activities.push_back(std::move(decl));
      } else if (verb == "filter") {
        if (manifest.declared_activities.empty()) fail(l, 0, "'filter' before any activity");
        IntentFilter f;
        parse_filter_attrs(l, 1, f);
        manifest.declared_activities.back().intent_filters.push_back(std::move(f));
      } else if (verb == "service") {
        expect_arity(l, 2, 2);
        manifest.declared_services.push_back(l.tokens[1].text);
      } else {
        fail(l, 0, "unknown manifest entry '" + verb + "'");
      }
    });
  }

  BundleEntry parse_entry(const Line& l, std::size_t tok) const {
    const std::string& s = l.tokens[tok].text;
    auto colon = s.find(':');
    if (colon == std::string::npos || colon == 0)
      fail(l, tok, "expected <key>:<type>, got '" + s + "'");
    auto t = basic_type_from(std::string_view(s).substr(colon + 1));
    if (!t) fail(l, tok, "bundle entries take basic types only: '" + s + "'");
    return BundleEntry{s.substr(0, colon), *t};
  }

  // <type> [k:t ...] starting at token `tok`.
  ExtraType parse_extra_type(const Line& l, std::size_t tok) const {
    if (tok >= l.tokens.size()) fail(l, l.tokens.size() - 1, "missing extra type");
    const std::string& name = l.tokens[tok].text;
    if (name == "bundle") {
      std::vector<BundleEntry> entries;
      for (std::size_t i = tok + 1; i < l.tokens.size(); ++i) entries.push_back(parse_entry(l, i));
      return ExtraType::bundle(std::move(entries));
    }
    auto t = basic_type_from(name);
    if (!t) fail(l, tok, "unknown extra type '" + name + "'");
    if (l.tokens.size() > tok + 1) fail(l, tok + 1, "only bundle types take entries");
    return ExtraType::of(*t);
  }

  Stmt parse_stmt(const Line& l) const {
    const std::string& verb = l.tokens[0].text;
    if (verb == "new") {
      if (l.tokens.size() < 3) fail(l, l.tokens.size() - 1, "'new' expects <var> explicit|implicit");
      stmt::NewIntent s;
      s.var = l.tokens[1].text;
      if (l.tokens[2].text == "explicit") {
        expect_arity(l, 4, 4);
        s.explicit_target = l.tokens[3].text;
      } else if (l.tokens[2].text == "implicit") {
        parse_filter_attrs(l, 3, s.implicit_spec);
        if (s.implicit_spec.empty()) fail(l, 2, "implicit intent needs at least one attribute");
      } else {
        fail(l, 2, "expected 'explicit' or 'implicit'");
      }
      return s;
    }
    if (verb == "put") {
      if (l.tokens.size() < 4) fail(l, l.tokens.size() - 1, "'put' expects <var> <key> <type>");
      return stmt::PutExtra{l.tokens[1].text, l.tokens[2].text, parse_extra_type(l, 3)};
    }
    if (verb == "putbundle") {
      if (l.tokens.size() < 2) fail(l, 0, "'putbundle' expects <var>");
      stmt::PutBundle s{l.tokens[1].text, {}};
      for (std::size_t i = 2; i < l.tokens.size(); ++i) s.entries.push_back(parse_entry(l, i));
      return s;
    }
    if (verb == "start" || verb == "start-for-result" || verb == "start-if-needed") {
      expect_arity(l, 2, 2);
      stmt::StartApi api = verb == "start"              ? stmt::StartApi::StartActivity
                           : verb == "start-for-result" ? stmt::StartApi::StartActivityForResult
                                                        : stmt::StartApi::StartActivityIfNeeded;
      return stmt::StartActivity{l.tokens[1].text, api};
    }
    if (verb == "get") {
      if (l.tokens.size() < 3) fail(l, l.tokens.size() - 1, "'get' expects <type> <key>");
      // get <type> <key> [k:t ...]: entries follow the key.
      const std::string& tname = l.tokens[1].text;
      stmt::GetExtra s;
      s.key = l.tokens[2].text;
      if (tname == "bundle") {
        std::vector<BundleEntry> entries;
        for (std::size_t i = 3; i < l.tokens.size(); ++i) entries.push_back(parse_entry(l, i));
        s.type = ExtraType::bundle(std::move(entries));
      } else {
        auto t = basic_type_from(tname);
        if (!t) fail(l, 1, "unknown extra type '" + tname + "'");
        expect_arity(l, 3, 3);
        s.type = ExtraType::of(*t);
      }
      return s;
    }
    if (verb == "fragment-add") {
      expect_arity(l, 2, 2);
      return stmt::FragmentAdd{l.tokens[1].text};
    }
    if (verb == "fragment-replace") {
      expect_arity(l, 2, 2);
      return stmt::FragmentReplace{l.tokens[1].text};
    }
    if (verb == "fragment-commit") {
      expect_arity(l, 1, 1);
      return stmt::FragmentCommit{};
    }
    if (verb == "set-adapter") {
      expect_arity(l, 2, 2);
      return stmt::SetAdapter{l.tokens[1].text};
    }
    if (verb == "call") {
      expect_arity(l, 2, 2);
      const std::string& target = l.tokens[1].text;
      auto dot = target.rfind('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == target.size())
        fail(l, 1, "'call' expects <Unit>.<method>");
      return stmt::Call{target.substr(0, dot), target.substr(dot + 1)};
    }
    if (verb == "nop") {
      expect_arity(l, 1, 1);
      return stmt::Nop{};
    }
    fail(l, 0, "unknown statement '" + verb + "'");
  }

  UnitDef parse_unit(const Line& opener) {
    if (opener.tokens.size() < 3) fail(opener, opener.tokens.size() - 1, "'unit' expects <name> <kind>");
    UnitDef unit;
    unit.name = opener.tokens[1].text;
    const std::string& kind = opener.tokens[2].text;
    if (kind == "activity")
      unit.kind = UnitKind::Activity;
    else if (kind == "fragment")
      unit.kind = UnitKind::Fragment;
    else if (kind == "inner")
      unit.kind = UnitKind::Inner;
    else if (kind == "service")
      unit.kind = UnitKind::Service;
    else if (kind == "plain")
      unit.kind = UnitKind::Plain;
    else
      fail(opener, 2, "unknown unit kind '" + kind + "'");

    for (std::size_t i = 3; i < opener.tokens.size(); ++i) {
      auto [k, v] = split_attr(opener.tokens[i].text);
      if (k == "layout" && !v.empty())
        unit.layout_ref = v;
      else if (k == "outer" && !v.empty() && unit.kind == UnitKind::Inner)
        unit.outer = v;
      else
        fail(opener, i, "unknown unit attribute '" + opener.tokens[i].text + "'");
    }
    if (unit.kind == UnitKind::Inner && unit.outer.empty())
      fail(opener, 2, "inner unit needs outer=<Unit>");

    block(opener, [&](const Line& l) {
      if (l.tokens[0].text != "method") fail(l, 0, "expected 'method' or 'end'");
      expect_arity(l, 2, 2);
      MethodDef m;
      m.name = l.tokens[1].text;
      m.is_lifecycle = is_lifecycle_name(m.name);
      block(l, [&](const Line& s) { m.body.push_back(parse_stmt(s)); });
      unit.methods.push_back(std::move(m));
    });
    return unit;
  }

  ExtraLiteral parse_click_extra(const Line& l, std::size_t tok, const std::string& spec) const {
    auto c1 = spec.find(':');
    auto c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || c1 == 0)
      fail(l, tok, "extra expects <key>:<type>:<value>");
    std::string key = spec.substr(0, c1);
    auto type = basic_type_from(std::string_view(spec).substr(c1 + 1, c2 - c1 - 1));
    if (!type) fail(l, tok, "click extras take basic types only");
    std::string raw = spec.substr(c2 + 1);
    BasicValue value;
    switch (*type) {
      case BasicType::String:
        value = raw;
        break;
      case BasicType::Integer: {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
        if (ec != std::errc() || p != raw.data() + raw.size()) fail(l, tok, "bad int literal '" + raw + "'");
        value = v;
        break;
      }
      case BasicType::Boolean:
        if (raw != "true" && raw != "false") fail(l, tok, "bad bool literal '" + raw + "'");
        value = raw == "true";
        break;
      case BasicType::Float:
        try {
          std::size_t used = 0;
          double d = std::stod(raw, &used);
          if (used != raw.size()) throw std::invalid_argument(raw);
          value = d;
        } catch (const std::exception&) {
          fail(l, tok, "bad float literal '" + raw + "'");
        }
        break;
    }
    return ExtraLiteral{key, ExtraType::of(*type), value};
  }

  LayoutTree parse_layout(const std::string& id) {
    const Line& opener = lines_[pos_ - 1];
    // Nodes arrive flat with parent references; build an index path table.
    std::optional<Node> root;
    std::map<std::string, std::vector<std::size_t>> paths;  // id -> child index path from root

    auto locate = [&](const std::vector<std::size_t>& path) -> Node& {
      Node* n = &*root;
      for (std::size_t idx : path) n = &n->children[idx];
      return *n;
    };

    block(opener, [&](const Line& l) {
      if (l.tokens[0].text != "node") fail(l, 0, "expected 'node' or 'end'");
      if (l.tokens.size() < 7) fail(l, l.tokens.size() - 1, "'node' expects <id> <type> <x> <y> <w> <h>");
      Node n;
      n.id = l.tokens[1].text;
      auto type = component_type_from(l.tokens[2].text);
      if (!type) fail(l, 2, "unknown component type '" + l.tokens[2].text + "'");
      n.type = *type;
      n.bounds = Rect{parse_int(l, 3, l.tokens[3].text), parse_int(l, 4, l.tokens[4].text),
                      parse_int(l, 5, l.tokens[5].text), parse_int(l, 6, l.tokens[6].text)};
      std::optional<std::string> parent;
      std::optional<ClickLaunch> launch;
      std::vector<ExtraLiteral> extras;
      for (std::size_t i = 7; i < l.tokens.size(); ++i) {
        auto [k, v] = split_attr(l.tokens[i].text);
        if (k == "clickable" && l.tokens[i].text == "clickable") {
          n.clickable = true;
        } else if (k == "parent") {
          parent = v;
        } else if (k == "color") {
          n.color = parse_int(l, i, v);
        } else if (k == "label") {
          n.label = v;
        } else if (k == "launch") {
          if (v.empty()) fail(l, i, "launch needs a target");
          launch = ClickLaunch{v, {}};
        } else if (k == "extra") {
          extras.push_back(parse_click_extra(l, i, v));
        } else {
          fail(l, i, "unknown node attribute '" + l.tokens[i].text + "'");
        }
      }
      if (!extras.empty() && !launch) fail(l, 0, "extra without launch");
      if (launch) {
        launch->extras = std::move(extras);
        n.on_click = std::move(launch);
      }
      if (paths.count(n.id))
        throw ModelError(ModelError::Kind::Duplicate, "layout/" + id + "/node/" + n.id,
                         "node id '" + n.id + "' used twice");
      if (!parent) {
        if (root) fail(l, 0, "layout '" + id + "' has more than one root node");
        root = std::move(n);
        paths[root->id] = {};
        return;
      }
      if (!root) fail(l, 0, "first node of a layout must be the root");
      auto it = paths.find(*parent);
      if (it == paths.end())
        throw ModelError(ModelError::Kind::Reference, "layout/" + id + "/node/" + n.id,
                         "unknown parent '" + *parent + "'");
      Node& p = locate(it->second);
      std::vector<std::size_t> path = it->second;
      path.push_back(p.children.size());
      std::string nid = n.id;
      p.children.push_back(std::move(n));
      paths[nid] = std::move(path);
    });
    if (!root) throw ParseError(opener.number, opener.tokens[0].column, "layout '" + id + "' has no nodes");
    return LayoutTree{std::move(*root)};
  }

  void parse_runtime(RuntimeSpec& rt) {
    const Line& opener = lines_[pos_ - 1];
    ActivityRuntime* current = nullptr;
    std::string current_name;
    block(opener, [&](const Line& l) {
      const std::string& verb = l.tokens[0].text;
      if (verb == "login-activity") {
        expect_arity(l, 2, 2);
        if (rt.login_activity) fail(l, 0, "login-activity given twice");
        rt.login_activity = l.tokens[1].text;
      } else if (verb == "activity") {
        if (l.tokens.size() < 2) fail(l, 0, "'activity' expects a name");
        current_name = l.tokens[1].text;
        if (rt.activities.count(current_name))
          throw ModelError(ModelError::Kind::Duplicate, "runtime/" + current_name,
                           "runtime entry for '" + current_name + "' given twice");
        current = &rt.activities[current_name];
        for (std::size_t i = 2; i < l.tokens.size(); ++i) {
          auto [k, v] = split_attr(l.tokens[i].text);
          if (l.tokens[i].text == "crash-if-missing") {
            current->crash_if_missing = true;
          } else if (l.tokens[i].text == "login") {
            current->requires_login = true;
          } else if (k == "permission" && !v.empty()) {
            current->requires_permission = v;
          } else if (k == "external") {
            auto e = external_data_from(v);
            if (!e) fail(l, i, "unknown external data kind '" + v + "'");
            current->external_data = e;
          } else {
            fail(l, i, "unknown runtime flag '" + l.tokens[i].text + "'");
          }
        }
      } else if (verb == "requires") {
        if (!current) fail(l, 0, "'requires' before any runtime activity");
        if (l.tokens.size() < 3) fail(l, l.tokens.size() - 1, "'requires' expects <key> <type>");
        current->required_extras.push_back(ExtraDecl{l.tokens[1].text, parse_extra_type(l, 2)});
      } else {
        fail(l, 0, "unknown runtime entry '" + verb + "'");
      }
    });
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Writer

bool needs_quotes(std::string_view s) {
  if (s.empty()) return true;
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '"' || c == '#' || c == '\\') return true;
  return false;
}

std::string quote(std::string_view s) {
  if (!needs_quotes(s)) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string attr(std::string_view key, std::string_view value) {
  return std::string(key) + "=" + quote(value);
}

std::string filter_attrs(const IntentFilter& f) {
  std::string out;
  if (f.action) out += " " + attr("action", *f.action);
  for (const auto& c : f.categories) out += " " + attr("category", c);
  if (f.data) out += " " + attr("data", *f.data);
  if (f.mime_type) out += " " + attr("mime", *f.mime_type);
  return out;
}

std::string entries_text(const std::vector<BundleEntry>& entries) {
  std::string out;
  for (const auto& e : entries) out += " " + quote(e.key + ":" + to_string(e.type));
  return out;
}

std::string type_text(const ExtraType& t) {
  if (!t.is_bundle) return to_string(t.basic);
  return "bundle" + entries_text(t.entries);
}

void write_node(std::ostringstream& os, const Node& n, const std::string* parent) {
  os << "  node " << quote(n.id) << ' ' << to_string(n.type) << ' ' << n.bounds.x << ' '
     << n.bounds.y << ' ' << n.bounds.w << ' ' << n.bounds.h;
  if (parent) os << ' ' << attr("parent", *parent);
  if (n.clickable) os << " clickable";
  if (n.color != 0) os << " color=" << n.color;
  if (!n.label.empty()) os << ' ' << attr("label", n.label);
  if (n.on_click) {
    os << ' ' << attr("launch", n.on_click->target);
    for (const auto& e : n.on_click->extras) {
      const auto& v = std::get<BasicValue>(e.value);
      os << ' ' << attr("extra", e.key + ":" + to_string(e.type.basic) + ":" + format_value(v));
    }
  }
  os << '\n';
  for (const auto& c : n.children) write_node(os, c, &n.id);
}

}  // namespace

AppModel parse_document(std::string_view text) { return Parser(tokenize(text)).run(); }

std::pair<std::string, LayoutTree> parse_layout_text(std::string_view text) {
  return Parser(tokenize(text)).layout_only();
}

AppModel parse_app(std::string_view text) {
  AppModel model = parse_document(text);
  auto diags = validate(model);
  if (!diags.empty()) {
    const Diagnostic& d = diags.front();
    ModelError::Kind kind = d.category == Diagnostic::Category::Reference   ? ModelError::Kind::Reference
                            : d.category == Diagnostic::Category::Duplicate ? ModelError::Kind::Duplicate
                                                                            : ModelError::Kind::Invariant;
    throw ModelError(kind, d.path, d.message);
  }
  return model;
}

AppModel load_app_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_app(ss.str());
}

std::string format_stmt(const Stmt& s) {
  struct Visitor {
    std::string operator()(const stmt::NewIntent& s) const {
      if (s.explicit_target) return "new " + quote(s.var) + " explicit " + quote(*s.explicit_target);
      return "new " + quote(s.var) + " implicit" + filter_attrs(s.implicit_spec);
    }
    std::string operator()(const stmt::PutExtra& s) const {
      return "put " + quote(s.var) + " " + quote(s.key) + " " + type_text(s.type);
    }
    std::string operator()(const stmt::PutBundle& s) const {
      return "putbundle " + quote(s.var) + entries_text(s.entries);
    }
    std::string operator()(const stmt::StartActivity& s) const {
      switch (s.api) {
        case stmt::StartApi::StartActivity: return "start " + quote(s.var);
        case stmt::StartApi::StartActivityForResult: return "start-for-result " + quote(s.var);
        case stmt::StartApi::StartActivityIfNeeded: return "start-if-needed " + quote(s.var);
      }
      return {};
    }
    std::string operator()(const stmt::GetExtra& s) const {
      if (s.type.is_bundle) return "get bundle " + quote(s.key) + entries_text(s.type.entries);
      return "get " + to_string(s.type.basic) + " " + quote(s.key);
    }
    std::string operator()(const stmt::FragmentAdd& s) const { return "fragment-add " + quote(s.fragment); }
    std::string operator()(const stmt::FragmentReplace& s) const {
      return "fragment-replace " + quote(s.fragment);
    }
    std::string operator()(const stmt::FragmentCommit&) const { return "fragment-commit"; }
    std::string operator()(const stmt::SetAdapter& s) const { return "set-adapter " + quote(s.fragment); }
    std::string operator()(const stmt::Call& s) const { return "call " + quote(s.unit + "." + s.method); }
    std::string operator()(const stmt::Nop&) const { return "nop"; }
  };
  return std::visit(Visitor{}, s);
}

std::string serialize_unit(const UnitDef& unit) {
  std::ostringstream os;
  os << "unit " << quote(unit.name) << ' ' << to_string(unit.kind);
  if (unit.kind == UnitKind::Inner) os << ' ' << attr("outer", unit.outer);
  if (unit.layout_ref) os << ' ' << attr("layout", *unit.layout_ref);
  os << '\n';
  for (const auto& m : unit.methods) {
    os << "  method " << quote(m.name) << '\n';
    for (const auto& s : m.body) os << "    " << format_stmt(s) << '\n';
    os << "  end\n";
  }
  os << "end\n";
  return os.str();
}

std::string serialize_layout(const std::string& id, const LayoutTree& layout) {
  std::ostringstream os;
  os << "layout " << quote(id) << '\n';
  write_node(os, layout.root, nullptr);
  os << "end\n";
  return os.str();
}

std::string serialize_app(const AppModel& model) {
  std::ostringstream os;
  os << "app " << quote(model.package_id);
  if (model.revision != 0) os << " revision=" << model.revision;
  os << "\n\nmanifest\n";
  for (const auto& a : model.manifest.declared_activities) {
    os << "  activity " << quote(a.name);
    if (a.is_launcher) os << " launcher";
    if (a.exported) os << " exported";
    os << '\n';
    for (const auto& f : a.intent_filters) os << "  filter" << filter_attrs(f) << '\n';
  }
  for (const auto& s : model.manifest.declared_services) os << "  service " << quote(s) << '\n';
  os << "end\n";
  for (const auto& u : model.units) os << '\n' << serialize_unit(u);
  for (const auto& [id, layout] : model.layouts) os << '\n' << serialize_layout(id, layout);

  const RuntimeSpec& rt = model.runtime;
  if (rt.login_activity || !rt.activities.empty()) {
    os << "\nruntime\n";
    if (rt.login_activity) os << "  login-activity " << quote(*rt.login_activity) << '\n';
    for (const auto& [name, a] : rt.activities) {
      os << "  activity " << quote(name);
      if (a.crash_if_missing) os << " crash-if-missing";
      if (a.requires_permission) os << ' ' << attr("permission", *a.requires_permission);
      if (a.requires_login) os << " login";
      if (a.external_data) os << " external=" << to_string(*a.external_data);
      os << '\n';
      for (const auto& e : a.required_extras)
        os << "  requires " << quote(e.key) << ' ' << type_text(e.type) << '\n';
    }
    os << "end\n";
  }
  return os.str();
}

}  // namespace storyboard

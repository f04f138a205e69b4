#include "ehs/regex.hpp"

#include <algorithm>
#include <cctype>

namespace ehs {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw ModelError("alphabet must be non-empty");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], static_cast<Symbol>(i)).second)
      throw ModelError("duplicate alphabet symbol '" + names_[i] + "'");
  }
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
}

// Scans "(a, b, ...)" / "[a, b, ...]" starting at `open`; returns the
// normalised text and the index past the closer, or nullopt if the bracket
// does not enclose a comma-separated identifier list (parentheses then mean
// grouping).
std::optional<std::pair<std::string, std::size_t>> scan_list(std::string_view s, std::size_t open, char close,
                                                             bool need_comma) {
  std::size_t i = open + 1;
  std::string out(1, s[open]);
  bool comma = false;
  bool expect_ident = true;
  for (;;) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) return std::nullopt;
    if (s[i] == close && (!expect_ident || out.size() == 1)) {
      if (need_comma && !comma) return std::nullopt;
      out += close;
      return std::make_pair(out, i + 1);
    }
    if (expect_ident) {
      if (!ident_start(s[i])) return std::nullopt;
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.append(s.substr(i, j - i));
      i = j;
      expect_ident = false;
    } else if (s[i] == ',') {
      out += ',';
      comma = true;
      expect_ident = true;
      ++i;
    } else {
      return std::nullopt;
    }
  }
}

}  // namespace

std::vector<RegexToken> tokenize_regex(std::string_view s, std::size_t base) {
  using K = RegexToken::Kind;
  std::vector<RegexToken> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t pos = base + i;
    if (c == '(') {
      if (auto tuple = scan_list(s, i, ')', true)) {
        out.push_back({K::Leaf, tuple->first, pos});
        i = tuple->second;
      } else {
        out.push_back({K::LParen, "(", pos});
        ++i;
      }
    } else if (c == '[') {
      auto set = scan_list(s, i, ']', false);
      if (!set) throw ParseError("malformed letter set", pos);
      out.push_back({K::Leaf, set->first, pos});
      i = set->second;
    } else if (c == ')') {
      out.push_back({K::RParen, ")", pos});
      ++i;
    } else if (c == '+' || c == '|') {
      out.push_back({K::Union, std::string(1, c), pos});
      ++i;
    } else if (c == ';') {
      out.push_back({K::Semi, ";", pos});
      ++i;
    } else if (c == '*') {
      out.push_back({K::Star, "*", pos});
      ++i;
    } else if (c == '!' || ident_start(c)) {
      std::size_t j = i + (c == '!' ? 1 : 0);
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j >= s.size() || !ident_start(s[j])) throw ParseError("expected identifier after '!'", base + j);
      std::size_t k = j;
      while (k < s.size() && ident_char(s[k])) ++k;
      std::string word = (c == '!' ? "!" : "") + std::string(s.substr(j, k - j));
      if (word == "empty")
        out.push_back({K::Empty, word, pos});
      else if (word == "eps")
        out.push_back({K::Eps, word, pos});
      else
        out.push_back({K::Leaf, word, pos});
      i = k;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "' in regex", pos);
    }
  }
  out.push_back({K::End, "<end>", base + s.size()});
  return out;
}

RegexExpr parse_regex(std::string_view text, const SymbolLookup& lookup, std::size_t base) {
  auto resolve = [&](const std::string& tok, std::size_t pos) -> Symbol {
    if (auto s = lookup(tok)) return *s;
    throw UnknownSymbolError(tok, pos);
  };
  return parse_regex_with<Symbol>(text, resolve, base);
}

RegexExpr parse_regex(std::string_view text, const Alphabet& alphabet) {
  return parse_regex(text, SymbolLookup([&](std::string_view t) { return alphabet.find(t); }));
}

std::string to_string(const RegexExpr& r, const Alphabet& alphabet) {
  return to_string(r, [&](Symbol s) { return alphabet.name(s); });
}

// --- derivatives -----------------------------------------------------------

int DerivativeMatcher::intern(Term t) {
  std::string key;
  key.reserve(16 + 4 * t.alts.size());
  key += static_cast<char>(t.kind);
  auto put = [&](int v) { key.append(reinterpret_cast<const char*>(&v), sizeof v); };
  put(t.a);
  put(t.b);
  for (int v : t.alts) put(v);
  auto [it, fresh] = index_.emplace(std::move(key), static_cast<int>(terms_.size()));
  if (fresh) {
    terms_.push_back(std::move(t));
    nullable_.push_back(-1);
  }
  return it->second;
}

int DerivativeMatcher::mk_leaf(int leaf) { return intern(Term{T::Leaf, leaf}); }

int DerivativeMatcher::mk_concat(int a, int b) {
  if (a == kEmpty || b == kEmpty) return kEmpty;
  if (a == kEps) return b;
  if (b == kEps) return a;
  if (terms_[a].kind == T::Concat) {
    int x = terms_[a].a;
    int y = terms_[a].b;
    return mk_concat(x, mk_concat(y, b));
  }
  return intern(Term{T::Concat, a, b});
}

int DerivativeMatcher::mk_union(std::vector<int> alts) {
  std::vector<int> flat;
  for (int t : alts) {
    if (t == kEmpty) continue;
    if (terms_[t].kind == T::Union)
      flat.insert(flat.end(), terms_[t].alts.begin(), terms_[t].alts.end());
    else
      flat.push_back(t);
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return kEmpty;
  if (flat.size() == 1) return flat.front();
  Term t{T::Union};
  t.alts = std::move(flat);
  return intern(std::move(t));
}

int DerivativeMatcher::mk_star(int a) {
  if (a == kEmpty || a == kEps) return kEps;
  if (terms_[a].kind == T::Star) return a;
  return intern(Term{T::Star, a});
}

bool DerivativeMatcher::nullable(int t) {
  if (nullable_[t] >= 0) return nullable_[t] != 0;
  bool v = false;
  const Term term = terms_[t];
  switch (term.kind) {
    case T::Empty: v = false; break;
    case T::Epsilon: v = true; break;
    case T::Leaf: v = false; break;
    case T::Concat: v = nullable(term.a) && nullable(term.b); break;
    case T::Union:
      v = std::any_of(term.alts.begin(), term.alts.end(), [&](int x) { return nullable(x); });
      break;
    case T::Star: v = true; break;
  }
  nullable_[t] = v ? 1 : 0;
  return v;
}

int DerivativeMatcher::derive(int t, Symbol a) {
  std::uint64_t key = (static_cast<std::uint64_t>(t) << 32) | a;
  if (auto it = deriv_.find(key); it != deriv_.end()) return it->second;
  const Term term = terms_[t];
  int out = kEmpty;
  switch (term.kind) {
    case T::Empty:
    case T::Epsilon: out = kEmpty; break;
    case T::Leaf: out = leaves_[term.a](a) ? kEps : kEmpty; break;
    case T::Concat: {
      int d = mk_concat(derive(term.a, a), term.b);
      out = nullable(term.a) ? mk_union({d, derive(term.b, a)}) : d;
      break;
    }
    case T::Union: {
      std::vector<int> ds;
      ds.reserve(term.alts.size());
      for (int x : term.alts) ds.push_back(derive(x, a));
      out = mk_union(std::move(ds));
      break;
    }
    case T::Star: out = mk_concat(derive(term.a, a), t); break;
  }
  deriv_.emplace(key, out);
  return out;
}

DerivativeMatcher::State DerivativeMatcher::step(State s, Symbol a) { return derive(s, a); }

bool DerivativeMatcher::matches(std::span<const Symbol> word) {
  State s = root_;
  for (Symbol a : word) {
    s = derive(s, a);
    if (s == kEmpty) return false;
  }
  return nullable(s);
}

bool denotes(const RegexExpr& r, std::span<const Symbol> word) {
  DerivativeMatcher m(r, [](Symbol leaf, Symbol s) { return leaf == s; });
  return m.matches(word);
}

}  // namespace ehs

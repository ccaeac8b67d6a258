#include "invarr/value.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace invarr {

namespace {
constexpr long long kEnumerationLimit = 2'000'000;
}

// ---------------------------------------------------------------------------
// Ty

Ty Ty::unit() {
  static const Ty t{std::make_shared<const Node>(Node{Kind::Unit, 0, 0, nullptr, nullptr})};
  return t;
}

Ty Ty::zero() {
  static const Ty t{std::make_shared<const Node>(Node{Kind::Zero, 0, 0, nullptr, nullptr})};
  return t;
}

Ty Ty::fin(int atom_count) {
  if (atom_count < 1) throw std::invalid_argument("fin: atom count must be >= 1");
  return Ty{std::make_shared<const Node>(Node{Kind::Fin, atom_count, 0, nullptr, nullptr})};
}

Ty Ty::prod(Ty left, Ty right) {
  return Ty{std::make_shared<const Node>(Node{Kind::Prod, 0, 0, left.node_, right.node_})};
}

Ty Ty::sum(Ty left, Ty right) {
  return Ty{std::make_shared<const Node>(Node{Kind::Sum, 0, 0, left.node_, right.node_})};
}

Ty Ty::seq(Ty elem, int max_len) {
  if (max_len < 0) throw std::invalid_argument("seq: max length must be >= 0");
  return Ty{std::make_shared<const Node>(Node{Kind::Seq, max_len, 0, elem.node_, nullptr})};
}

Ty Ty::serialized(Ty payload, int alphabet, int max_len) {
  if (alphabet < 1) throw std::invalid_argument("serialized: alphabet must be >= 1");
  if (max_len < 0) throw std::invalid_argument("serialized: max length must be >= 0");
  return Ty{std::make_shared<const Node>(Node{Kind::Serialized, max_len, alphabet, payload.node_, nullptr})};
}

int Ty::atom_count() const {
  if (kind() != Kind::Fin) throw std::logic_error("atom_count: not fin");
  return node_->a;
}

int Ty::max_len() const {
  if (kind() != Kind::Seq && kind() != Kind::Serialized)
    throw std::logic_error("max_len: not a bounded sequence type");
  return node_->a;
}

int Ty::alphabet() const {
  if (kind() != Kind::Serialized) throw std::logic_error("alphabet: not serialized");
  return node_->b;
}

Ty Ty::left() const {
  if (kind() != Kind::Prod && kind() != Kind::Sum) throw std::logic_error("left: not prod/sum");
  return Ty{node_->kid0};
}

Ty Ty::right() const {
  if (kind() != Kind::Prod && kind() != Kind::Sum) throw std::logic_error("right: not prod/sum");
  return Ty{node_->kid1};
}

Ty Ty::elem() const {
  if (kind() != Kind::Seq) throw std::logic_error("elem: not seq");
  return Ty{node_->kid0};
}

Ty Ty::payload() const {
  if (kind() != Kind::Serialized) throw std::logic_error("payload: not serialized");
  return Ty{node_->kid0};
}

int Ty::compare(const Node& lhs, const Node& rhs) {
  if (lhs.kind != rhs.kind) return lhs.kind < rhs.kind ? -1 : 1;
  if (lhs.a != rhs.a) return lhs.a < rhs.a ? -1 : 1;
  if (lhs.b != rhs.b) return lhs.b < rhs.b ? -1 : 1;
  for (auto pick : {&Node::kid0, &Node::kid1}) {
    const auto& lk = lhs.*pick;
    const auto& rk = rhs.*pick;
    if (!lk && !rk) continue;
    if (!lk) return -1;
    if (!rk) return 1;
    if (int c = compare(*lk, *rk); c != 0) return c;
  }
  return 0;
}

bool Ty::operator==(const Ty& other) const {
  return node_ == other.node_ || compare(*node_, *other.node_) == 0;
}

bool Ty::operator<(const Ty& other) const { return compare(*node_, *other.node_) < 0; }

std::string Ty::to_string() const {
  switch (kind()) {
    case Kind::Unit: return "unit";
    case Kind::Zero: return "zero";
    case Kind::Fin: return "(fin " + std::to_string(node_->a) + ")";
    case Kind::Prod: return "(prod " + Ty{node_->kid0}.to_string() + " " + Ty{node_->kid1}.to_string() + ")";
    case Kind::Sum: return "(sum " + Ty{node_->kid0}.to_string() + " " + Ty{node_->kid1}.to_string() + ")";
    case Kind::Seq:
      return "(seq " + Ty{node_->kid0}.to_string() + " " + std::to_string(node_->a) + ")";
    case Kind::Serialized:
      return "(serialized " + Ty{node_->kid0}.to_string() + " " + std::to_string(node_->b) + " " +
             std::to_string(node_->a) + ")";
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Type parser

namespace {

struct TyParser {
  std::string_view text;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("type syntax error at position " + std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string word() {
    size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '-'))
      ++pos;
    if (start == pos) fail("expected a word");
    return std::string(text.substr(start, pos - start));
  }

  int number() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) fail("expected a number");
    return std::stoi(std::string(text.substr(start, pos - start)));
  }

  Ty term() {
    skip_ws();
    if (eat('(')) {
      skip_ws();
      std::string head = word();
      Ty out = Ty::unit();
      if (head == "fin") {
        out = Ty::fin(number());
      } else if (head == "prod" || head == "sum") {
        Ty a = term();
        Ty b = term();
        out = head == "prod" ? Ty::prod(a, b) : Ty::sum(a, b);
      } else if (head == "seq") {
        Ty a = term();
        out = Ty::seq(a, number());
      } else if (head == "serialized") {
        Ty a = term();
        int alphabet = number();
        int len = number();
        out = Ty::serialized(a, alphabet, len);
      } else {
        fail("unknown type constructor '" + head + "'");
      }
      skip_ws();
      if (!eat(')')) fail("expected ')'");
      return out;
    }
    std::string head = word();
    if (head == "unit") return Ty::unit();
    if (head == "zero") return Ty::zero();
    fail("unknown type '" + head + "'");
  }
};

} // namespace

Ty parse_ty(std::string_view text) {
  TyParser p{text};
  Ty out = p.term();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return out;
}

// ---------------------------------------------------------------------------
// Value

Value Value::unit() { return Value{}; }

Value Value::atom(int index) {
  if (index < 0) throw std::invalid_argument("atom: negative index");
  Value v;
  v.kind_ = Kind::Atom;
  v.atom_ = index;
  return v;
}

Value Value::pair(Value first, Value second) {
  Value v;
  v.kind_ = Kind::Pair;
  v.kids_.push_back(std::move(first));
  v.kids_.push_back(std::move(second));
  return v;
}

Value Value::in_left(Value inner) {
  Value v;
  v.kind_ = Kind::InL;
  v.kids_.push_back(std::move(inner));
  return v;
}

Value Value::in_right(Value inner) {
  Value v;
  v.kind_ = Kind::InR;
  v.kids_.push_back(std::move(inner));
  return v;
}

Value Value::seq(std::vector<Value> items) {
  Value v;
  v.kind_ = Kind::Seq;
  v.kids_ = std::move(items);
  return v;
}

int Value::atom_index() const {
  if (kind_ != Kind::Atom) throw std::logic_error("atom_index: not an atom");
  return atom_;
}

const Value& Value::first() const {
  if (kind_ != Kind::Pair) throw std::logic_error("first: not a pair");
  return kids_[0];
}

const Value& Value::second() const {
  if (kind_ != Kind::Pair) throw std::logic_error("second: not a pair");
  return kids_[1];
}

const Value& Value::inner() const {
  if (kind_ != Kind::InL && kind_ != Kind::InR) throw std::logic_error("inner: not a tagged value");
  return kids_[0];
}

const std::vector<Value>& Value::items() const {
  if (kind_ != Kind::Seq) throw std::logic_error("items: not a sequence");
  return kids_;
}

int Value::compare(const Value& lhs, const Value& rhs) {
  if (lhs.kind_ != rhs.kind_) return lhs.kind_ < rhs.kind_ ? -1 : 1;
  if (lhs.atom_ != rhs.atom_) return lhs.atom_ < rhs.atom_ ? -1 : 1;
  if (lhs.kids_.size() != rhs.kids_.size()) return lhs.kids_.size() < rhs.kids_.size() ? -1 : 1;
  for (size_t i = 0; i < lhs.kids_.size(); ++i)
    if (int c = compare(lhs.kids_[i], rhs.kids_[i]); c != 0) return c;
  return 0;
}

bool Value::operator==(const Value& other) const { return compare(*this, other) == 0; }
bool Value::operator<(const Value& other) const { return compare(*this, other) < 0; }

std::string Value::to_string() const {
  switch (kind_) {
    case Kind::Unit: return "()";
    case Kind::Atom: return "a" + std::to_string(atom_);
    case Kind::Pair: return "(" + kids_[0].to_string() + "," + kids_[1].to_string() + ")";
    case Kind::InL: return "L " + kids_[0].to_string();
    case Kind::InR: return "R " + kids_[0].to_string();
    case Kind::Seq: {
      std::string out = "[";
      for (size_t i = 0; i < kids_.size(); ++i) {
        if (i) out += ",";
        out += kids_[i].to_string();
      }
      return out + "]";
    }
  }
  throw std::logic_error("unreachable");
}

std::string AtomDisplay::show(const Value& v) const {
  if (v.is(Value::Kind::Atom)) {
    int i = v.atom_index();
    if (i >= 0 && static_cast<size_t>(i) < names.size()) return names[i];
  }
  return v.to_string();
}

// ---------------------------------------------------------------------------
// Enumeration and typing

long long cardinality(const Ty& ty) {
  auto checked_mul = [](long long a, long long b) {
    if (a != 0 && b > std::numeric_limits<long long>::max() / a)
      throw std::length_error("cardinality overflow");
    return a * b;
  };
  switch (ty.kind()) {
    case Ty::Kind::Unit: return 1;
    case Ty::Kind::Zero: return 0;
    case Ty::Kind::Fin: return ty.atom_count();
    case Ty::Kind::Prod: return checked_mul(cardinality(ty.left()), cardinality(ty.right()));
    case Ty::Kind::Sum: return cardinality(ty.left()) + cardinality(ty.right());
    case Ty::Kind::Seq: {
      long long base = cardinality(ty.elem());
      long long total = 0, pow = 1;
      for (int len = 0; len <= ty.max_len(); ++len) {
        total += pow;
        pow = checked_mul(pow, base);
      }
      return total;
    }
    case Ty::Kind::Serialized: {
      long long total = 0, pow = 1;
      for (int len = 0; len <= ty.max_len(); ++len) {
        total += pow;
        pow = checked_mul(pow, ty.alphabet());
      }
      return total;
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

// Fixed-length tuples over a base enumeration, lexicographic.
void append_tuples(const std::vector<Value>& base, int len, std::vector<Value>& out) {
  std::vector<size_t> ix(len, 0);
  if (len == 0) {
    out.push_back(Value::seq({}));
    return;
  }
  if (base.empty()) return;
  while (true) {
    std::vector<Value> items;
    items.reserve(len);
    for (int i = 0; i < len; ++i) items.push_back(base[ix[i]]);
    out.push_back(Value::seq(std::move(items)));
    int pos = len - 1;
    while (pos >= 0 && ++ix[pos] == base.size()) {
      ix[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

} // namespace

std::vector<Value> enumerate(const Ty& ty) {
  if (cardinality(ty) > kEnumerationLimit)
    throw std::length_error("type too large to enumerate: " + ty.to_string());
  std::vector<Value> out;
  switch (ty.kind()) {
    case Ty::Kind::Unit:
      out.push_back(Value::unit());
      break;
    case Ty::Kind::Zero:
      break;
    case Ty::Kind::Fin:
      for (int i = 0; i < ty.atom_count(); ++i) out.push_back(Value::atom(i));
      break;
    case Ty::Kind::Prod: {
      auto ls = enumerate(ty.left());
      auto rs = enumerate(ty.right());
      out.reserve(ls.size() * rs.size());
      for (const auto& l : ls)
        for (const auto& r : rs) out.push_back(Value::pair(l, r));
      break;
    }
    case Ty::Kind::Sum: {
      for (const auto& l : enumerate(ty.left())) out.push_back(Value::in_left(l));
      for (const auto& r : enumerate(ty.right())) out.push_back(Value::in_right(r));
      break;
    }
    case Ty::Kind::Seq: {
      auto base = enumerate(ty.elem());
      for (int len = 0; len <= ty.max_len(); ++len) append_tuples(base, len, out);
      break;
    }
    case Ty::Kind::Serialized: {
      std::vector<Value> tokens;
      for (int i = 0; i < ty.alphabet(); ++i) tokens.push_back(Value::atom(i));
      for (int len = 0; len <= ty.max_len(); ++len) append_tuples(tokens, len, out);
      break;
    }
  }
  return out;
}

bool check_type(const Value& v, const Ty& ty) {
  switch (ty.kind()) {
    case Ty::Kind::Unit: return v.is(Value::Kind::Unit);
    case Ty::Kind::Zero: return false;
    case Ty::Kind::Fin:
      return v.is(Value::Kind::Atom) && v.atom_index() < ty.atom_count();
    case Ty::Kind::Prod:
      return v.is(Value::Kind::Pair) && check_type(v.first(), ty.left()) &&
             check_type(v.second(), ty.right());
    case Ty::Kind::Sum:
      if (v.is(Value::Kind::InL)) return check_type(v.inner(), ty.left());
      if (v.is(Value::Kind::InR)) return check_type(v.inner(), ty.right());
      return false;
    case Ty::Kind::Seq: {
      if (!v.is(Value::Kind::Seq)) return false;
      const auto& items = v.items();
      if (items.size() > static_cast<size_t>(ty.max_len())) return false;
      return std::all_of(items.begin(), items.end(),
                         [&](const Value& item) { return check_type(item, ty.elem()); });
    }
    case Ty::Kind::Serialized: {
      if (!v.is(Value::Kind::Seq)) return false;
      const auto& items = v.items();
      if (items.size() > static_cast<size_t>(ty.max_len())) return false;
      return std::all_of(items.begin(), items.end(), [&](const Value& item) {
        return item.is(Value::Kind::Atom) && item.atom_index() < ty.alphabet();
      });
    }
  }
  throw std::logic_error("unreachable");
}

} // namespace invarr

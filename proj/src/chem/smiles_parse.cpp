//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "targen/chem/smiles.hpp"
#include "targen/errors.hpp"

namespace targen::chem {
namespace {

struct PendingRing {
  int atom;
  std::optional<BondOrder> order;  // explicit bond char before the digit
  std::size_t pos;
};

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  MolGraph g;
  std::vector<bool> aromatic;            // per-atom lowercase flag
  std::map<int, PendingRing> open_rings; // ring-closure number -> first site

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  char take() { return text[pos++]; }
  bool done() const { return pos >= text.size(); }

  [[noreturn]] void fail(const std::string& why) const { throw SyntaxError(pos, why); }
  [[noreturn]] void unsupported(const std::string& what) const {
    throw UnsupportedFeature(what + " (position " + std::to_string(pos) + ")");
  }

  int add_atom(Element e, bool arom) {
    const int idx = g.add_atom(e);
    aromatic.push_back(arom);
    return idx;
  }

  void bond_atoms(int a, int b, std::optional<BondOrder> explicit_order) {
    BondOrder o;
    if (explicit_order) {
      o = *explicit_order;
    } else {
      o = aromatic[static_cast<std::size_t>(a)] && aromatic[static_cast<std::size_t>(b)]
              ? BondOrder::Aromatic
              : BondOrder::Single;
    }
    g.add_bond(a, b, o);
  }

  std::optional<BondOrder> try_bond_char() {
    switch (peek()) {
      case '-': ++pos; return BondOrder::Single;
      case '=': ++pos; return BondOrder::Double;
      case '#': ++pos; return BondOrder::Triple;
      case ':': ++pos; return BondOrder::Aromatic;
      case '/':
      case '\\':
        unsupported("stereo bond marker");
      default: return std::nullopt;
    }
  }

  // Returns (element, aromatic flag); consumes the symbol.
  std::pair<Element, bool> read_bare_atom() {
    const char c = peek();
    if (c == 'C' && pos + 1 < text.size() && text[pos + 1] == 'l') {
      pos += 2;
      return {Element::Cl, false};
    }
    if (c == 'B' && pos + 1 < text.size() && text[pos + 1] == 'r') {
      pos += 2;
      return {Element::Br, false};
    }
    switch (c) {
      case 'C': ++pos; return {Element::C, false};
      case 'N': ++pos; return {Element::N, false};
      case 'O': ++pos; return {Element::O, false};
      case 'P': ++pos; return {Element::P, false};
      case 'S': ++pos; return {Element::S, false};
      case 'B': ++pos; return {Element::B, false};
      case 'F': ++pos; return {Element::F, false};
      case 'c': ++pos; return {Element::C, true};
      case 'n': ++pos; return {Element::N, true};
      case 'o': ++pos; return {Element::O, true};
      case 'p': ++pos; return {Element::P, true};
      case 's': ++pos; return {Element::S, true};
      case 'b': ++pos; return {Element::B, true};
      case 'I':
        unsupported("element I outside the 12-element alphabet");
      case '*':
        unsupported("wildcard atom");
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  std::pair<Element, bool> read_bracket_atom() {
    ++pos;  // '['
    if (done()) fail("unterminated bracket atom");
    if (std::isdigit(static_cast<unsigned char>(peek())))
      unsupported("isotope specification");
    // symbol: one upper+optional lower, or aromatic lowercase (c n o p s b, as)
    bool arom = false;
    std::string sym;
    if (std::isupper(static_cast<unsigned char>(peek()))) {
      sym += take();
      if (!done() && std::islower(static_cast<unsigned char>(peek())) &&
          peek() != 'H') {
        // Greedy two-letter symbol; H after an element is an hcount, and a
        // second lowercase letter never starts one.
        sym += take();
      }
    } else if (std::islower(static_cast<unsigned char>(peek()))) {
      arom = true;
      sym += take();
      if (sym == "a" && peek() == 's') {  // aromatic arsenic
        sym = "As";
        ++pos;
      } else {
        sym[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sym[0])));
      }
    } else {
      fail("expected element symbol in bracket");
    }
    if (sym == "H") unsupported("explicit hydrogen atom");
    const Element e = element_from_symbol(sym);
    if (e == Element::Null)
      unsupported("element " + sym + " outside the 12-element alphabet");

    // optional hcount / charge, dropped (heavy-atom, charge-free graph)
    while (!done() && peek() != ']') {
      const char c = peek();
      if (c == 'H') {
        ++pos;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
      } else if (c == '+' || c == '-') {
        ++pos;
        while (!done() && (peek() == c || std::isdigit(static_cast<unsigned char>(peek())))) ++pos;
      } else if (c == '@') {
        unsupported("stereo center");
      } else if (c == ':') {
        unsupported("atom map");
      } else {
        fail(std::string("unexpected '") + c + "' in bracket atom");
      }
    }
    if (done()) fail("unterminated bracket atom");
    ++pos;  // ']'
    return {e, arom};
  }

  void ring_closure(int atom, int number, std::optional<BondOrder> order) {
    auto it = open_rings.find(number);
    if (it == open_rings.end()) {
      open_rings.emplace(number, PendingRing{atom, order, pos});
      return;
    }
    PendingRing first = it->second;
    open_rings.erase(it);
    if (first.atom == atom) fail("ring closure to same atom");
    std::optional<BondOrder> o = order;
    if (first.order && o && *first.order != *o) fail("conflicting ring bond orders");
    if (!o) o = first.order;
    bond_atoms(first.atom, atom, o);
  }

  MolGraph run() {
    if (text.empty()) throw SyntaxError(0, "empty input");
    std::vector<int> branch_stack;
    int prev = -1;                        // atom awaiting a bond
    std::optional<BondOrder> pending;     // explicit bond before next atom/ring
    bool fresh_component = true;          // after start or '.'

    while (!done()) {
      const char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (pending) fail("dangling bond");
        break;  // trailing whitespace terminates the SMILES token
      }
      if (c == '(') {
        if (prev < 0) fail("branch before any atom");
        if (pending) fail("bond before branch open");
        branch_stack.push_back(prev);
        ++pos;
        continue;
      }
      if (c == ')') {
        if (branch_stack.empty()) fail("unmatched ')'");
        if (pending) fail("dangling bond before ')'");
        prev = branch_stack.back();
        branch_stack.pop_back();
        ++pos;
        continue;
      }
      if (c == '.') {
        if (pending) fail("bond before '.'");
        if (!branch_stack.empty()) fail("'.' inside branch");
        if (prev < 0) fail("'.' before any atom");
        prev = -1;
        fresh_component = true;
        ++pos;
        continue;
      }
      if (auto b = try_bond_char()) {
        if (pending) fail("two bond symbols in a row");
        if (prev < 0) fail("bond before any atom");
        pending = b;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0) fail("ring closure before any atom");
        int number;
        if (c == '%') {
          ++pos;
          if (pos + 1 >= text.size() ||
              !std::isdigit(static_cast<unsigned char>(text[pos])) ||
              !std::isdigit(static_cast<unsigned char>(text[pos + 1])))
            fail("% must be followed by two digits");
          number = (text[pos] - '0') * 10 + (text[pos + 1] - '0');
          pos += 2;
        } else {
          number = c - '0';
          ++pos;
        }
        ring_closure(prev, number, pending);
        pending.reset();
        continue;
      }
      // atom
      std::pair<Element, bool> atom =
          c == '[' ? read_bracket_atom() : read_bare_atom();
      const int idx = add_atom(atom.first, atom.second);
      if (prev >= 0) {
        bond_atoms(prev, idx, pending);
      } else if (!fresh_component) {
        fail("atom without connection point");
      }
      pending.reset();
      fresh_component = false;
      prev = idx;
    }

    if (pending) fail("dangling bond at end of input");
    if (!branch_stack.empty()) fail("unclosed branch");
    if (!open_rings.empty()) {
      const auto& [num, ring] = *open_rings.begin();
      throw SyntaxError(ring.pos, "unclosed ring bond " + std::to_string(num));
    }
    if (g.atom_count() == 0) throw SyntaxError(0, "no atoms");
    return std::move(g);
  }
};

}  // namespace

MolGraph parse_smiles(std::string_view text) {
  Parser p;
  p.text = text;
  return p.run();
}

}  // namespace targen::chem

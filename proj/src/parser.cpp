/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/error.hpp"
#include "mtl/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <stdexcept>

namespace mtl {

std::string var_name(int index) { return "v" + std::to_string(index); }

int parse_var_name(std::string_view name)
{
	if (name.size() < 2 || name[0] != 'v' || name.size() > 10)
		return -1;
	for (std::size_t i = 1; i < name.size(); ++i)
		if (!std::isdigit(static_cast<unsigned char>(name[i])))
			return -1;
	if (name.size() > 2 && name[1] == '0')
		return -1;
	return std::stoi(std::string(name.substr(1)));
}

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
	Tok type;
	std::string text;
	std::size_t offset;
};

SourceLocation locate(std::string_view src, std::size_t offset)
{
	SourceLocation loc;
	loc.offset = offset;
	for (std::size_t i = 0; i < offset && i < src.size(); ++i) {
		if (src[i] == '\n') {
			++loc.line;
			loc.column = 1;
		} else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
			++loc.column;
		}
	}
	return loc;
}

struct Alias {
	std::string_view utf8;
	const char *ascii;
};

constexpr Alias kAliases[] = {
	{"\xC2\xAC", "~"},         // ¬
	{"\xE2\x88\xA7", "&"},     // ∧
	{"\xE2\x88\xA8", "|"},     // ∨
	{"\xE2\x86\x92", "->"},    // →
	{"\xE2\x86\x94", "<->"},   // ↔
	{"\xE2\x88\x80", "forall"},// ∀
	{"\xE2\x88\x83", "exists"},// ∃
	{"\xE2\x89\xA4", "<="},    // ≤
	{"\xE2\x89\xA5", ">="},    // ≥
	{"\xE2\x89\xA0", "!="},    // ≠
	{"\xC2\xB7", "*"},         // ·
	{"\xE2\x88\x92", "-"},     // −
};

std::vector<Token> lex(std::string_view src)
{
	std::vector<Token> out;
	std::size_t i = 0;
	auto err = [&](const std::string &msg) { throw ParseError("lex error: " + msg, locate(src, i)); };
	while (i < src.size()) {
		unsigned char c = static_cast<unsigned char>(src[i]);
		if (std::isspace(c)) {
			++i;
			continue;
		}
		if (src.substr(i, 3) == "c_{") {
			// literal sugar c_{q}; plain c_0 stays an identifier
			std::size_t close = src.find('}', i);
			if (close == std::string_view::npos)
				err("unterminated c_{...} literal");
			std::string body(src.substr(i + 3, close - i - 3));
			body.erase(std::remove_if(body.begin(), body.end(), [](unsigned char ch) { return std::isspace(ch); }),
			           body.end());
			try {
				Rational::parse(body);
			} catch (const std::exception &) {
				err("bad rational in c_{...} literal");
			}
			if (!body.empty() && body[0] == '-') {
				out.push_back({Tok::Sym, "-", i});
				body.erase(0, 1);
			}
			out.push_back({Tok::Number, body, i});
			i = close + 1;
			continue;
		}
		if (std::isalpha(c) || c == '_') {
			std::size_t j = i;
			while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
				++j;
			out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), i});
			i = j;
			continue;
		}
		if (std::isdigit(c)) {
			std::size_t j = i;
			auto digits = [&] {
				while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
					++j;
			};
			digits();
			if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
				++j;
				digits();
			}
			if (j + 1 < src.size() && src[j] == '/' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
				++j;
				digits();
			}
			out.push_back({Tok::Number, std::string(src.substr(i, j - i)), i});
			i = j;
			continue;
		}
		if (c >= 0x80) {
			bool matched = false;
			for (const auto &a : kAliases) {
				if (src.substr(i, a.utf8.size()) == a.utf8) {
					out.push_back({a.ascii[0] == 'f' || a.ascii[0] == 'e' ? Tok::Ident : Tok::Sym, a.ascii, i});
					i += a.utf8.size();
					matched = true;
					break;
				}
			}
			if (!matched)
				err("unexpected character");
			continue;
		}
		static constexpr std::string_view kSyms[] = {"<->", "->", "<=", ">=", "!=", "(", ")", ",", "~", "&",
		                                             "|",   "=",  "<",  ">",  "+",  "-", "*"};
		bool matched = false;
		for (auto s : kSyms) {
			if (src.substr(i, s.size()) == s) {
				out.push_back({Tok::Sym, std::string(s), i});
				i += s.size();
				matched = true;
				break;
			}
		}
		if (!matched)
			err(std::string("unexpected character '") + src[i] + "'");
	}
	out.push_back({Tok::End, "", src.size()});
	return out;
}

bool is_keyword(const std::string &s) { return s == "forall" || s == "exists"; }

class Parser {
public:
	Parser(std::string_view src, const Signature *sig, const VarTuple *dom)
	: src_(src), toks_(lex(src)), sig_(sig), dom_(dom)
	{}

	template <class Fn>
	auto run(Fn &&fn)
	{
		try {
			auto r = fn(*this);
			if (peek().type != Tok::End)
				fail("unexpected '" + peek().text + "'");
			return r;
		} catch (const ParseError &) {
			if (scope_error_)
				throw *scope_error_;
			if (furthest_)
				throw *furthest_;
			throw;
		}
	}

	// ---------------------------------------------------------------- L0

	Formula0 formula0()
	{
		Formula0 l = imp0();
		while (accept("<->"))
			l = Formula0::binary(Op::Iff, l, imp0());
		return l;
	}

	Term0 term_or0()
	{
		Term0 l = term_and0();
		while (is_sym("|") && has_function("|", 2)) {
			next();
			l = Term0::apply("|", {l, term_and0()});
		}
		return l;
	}

	// ---------------------------------------------------------------- L1

	Formula1 formula1()
	{
		Formula1 l = imp1();
		while (accept("<->"))
			l = Formula1::binary(Op::Iff, l, imp1());
		return l;
	}

	// ---------------------------------------------------------------- propositional

	PropFormula prop()
	{
		PropFormula l = prop_imp();
		while (accept("<->"))
			l = PropFormula::binary(PropFormula::Kind::Iff, l, prop_imp());
		return l;
	}

private:
	const Token &peek() const { return toks_[pos_]; }
	const Token &next() { return toks_[pos_++]; }
	bool is_sym(std::string_view s) const { return peek().type == Tok::Sym && peek().text == s; }
	bool accept(std::string_view s)
	{
		if (!is_sym(s))
			return false;
		++pos_;
		return true;
	}

	[[noreturn]] void fail(const std::string &msg) { fail_at(msg, peek().offset); }

	[[noreturn]] void fail_at(const std::string &msg, std::size_t offset)
	{
		ParseError e("parse error: " + msg, locate(src_, offset));
		if (!furthest_ || furthest_->where().offset <= offset)
			furthest_ = e;
		throw e;
	}

	void expect(std::string_view s)
	{
		if (!accept(s))
			fail("expected '" + std::string(s) + "' but found '" + (peek().type == Tok::End ? "end of input" : peek().text) + "'");
	}

	bool has_function(const std::string &sym, int arity) const
	{
		return sig_ && sig_->is_function(sym) && sig_->arity(sym) == arity;
	}

	bool has_relation(const std::string &sym, int arity) const
	{
		return sig_ && sig_->is_relation(sym) && sig_->arity(sym) == arity;
	}

	int expect_var()
	{
		if (peek().type != Tok::Ident || parse_var_name(peek().text) < 0)
			fail("expected a variable v<i>");
		return parse_var_name(next().text);
	}

	template <class T, class Fn>
	std::optional<T> attempt(std::set<std::size_t> &failed, Fn &&fn)
	{
		std::size_t start = pos_;
		if (failed.count(start))
			return std::nullopt;
		try {
			return fn();
		} catch (const ParseError &) {
			failed.insert(start);
			pos_ = start;
			return std::nullopt;
		}
	}

	// L0 formulas

	Formula0 imp0()
	{
		Formula0 l = or0();
		if (accept("->"))
			return Formula0::implies(l, imp0());
		return l;
	}

	Formula0 or0()
	{
		Formula0 l = and0();
		while (is_sym("|")) {
			// '|' may also close an enclosing probability constant
			std::size_t save = pos_;
			next();
			try {
				l = Formula0::disj(l, and0());
			} catch (const ParseError &) {
				pos_ = save;
				break;
			}
		}
		return l;
	}

	Formula0 and0()
	{
		Formula0 l = unary0();
		while (accept("&"))
			l = Formula0::conj(l, unary0());
		return l;
	}

	Formula0 unary0()
	{
		const Token &t = peek();
		if (t.type == Tok::Sym && t.text == "~") {
			if (auto a = attempt<Formula0>(failed0_, [&] { return atom0(); }))
				return *a;
			next();
			return Formula0::negate(unary0());
		}
		if (t.type == Tok::Ident && is_keyword(t.text)) {
			Op q = next().text == "forall" ? Op::Forall : Op::Exists;
			int v = expect_var();
			return Formula0::quantify(q, v, formula0());
		}
		if (t.type == Tok::Sym && t.text == "(") {
			if (auto a = attempt<Formula0>(failed0_, [&] { return atom0(); }))
				return *a;
			next();
			Formula0 f = formula0();
			expect(")");
			return f;
		}
		if (t.type == Tok::Ident && sig_ && sig_->is_relation(t.text)) {
			std::string name = next().text;
			int arity = sig_->arity(name);
			std::vector<Term0> args;
			if (accept("(")) {
				args.push_back(term_or0());
				while (accept(","))
					args.push_back(term_or0());
				expect(")");
			}
			if (static_cast<int>(args.size()) != arity)
				fail_at("arity mismatch: '" + name + "' expects " + std::to_string(arity) + " argument(s), got "
				            + std::to_string(args.size()),
				        t.offset);
			return Formula0::rel(name, std::move(args));
		}
		return atom0();
	}

	Formula0 atom0()
	{
		Term0 l = simple_term0();
		if (accept("="))
			return Formula0::eq(l, simple_term0());
		for (const char *r : {"<=", "<"}) {
			if (is_sym(r) && has_relation(r, 2)) {
				next();
				return Formula0::rel(r, {l, simple_term0()});
			}
		}
		fail("expected '=' after term");
	}

	Term0 term_and0()
	{
		Term0 l = simple_term0();
		while (is_sym("&") && has_function("&", 2)) {
			next();
			l = Term0::apply("&", {l, simple_term0()});
		}
		return l;
	}

	Term0 simple_term0()
	{
		const Token &t = peek();
		if (t.type == Tok::Sym && t.text == "~") {
			if (!has_function("~", 1))
				fail("'~' is not a function symbol of this signature");
			next();
			return Term0::apply("~", {simple_term0()});
		}
		if (t.type == Tok::Sym && t.text == "(") {
			next();
			Term0 inner = term_or0();
			expect(")");
			return inner;
		}
		if (t.type == Tok::Ident && parse_var_name(t.text) >= 0) {
			next();
			return Term0::var(parse_var_name(t.text));
		}
		if (t.type == Tok::Ident || t.type == Tok::Number) {
			if (t.type == Tok::Ident && is_keyword(t.text))
				fail("unexpected keyword '" + t.text + "'");
			auto kind = sig_ ? sig_->kind_of(t.text) : std::nullopt;
			if (!kind)
				fail("unknown symbol '" + t.text + "'");
			if (*kind == SymbolKind::Constant) {
				next();
				return Term0::constant(t.text);
			}
			if (*kind == SymbolKind::Function) {
				std::string name = next().text;
				expect("(");
				std::vector<Term0> args{term_or0()};
				while (accept(","))
					args.push_back(term_or0());
				expect(")");
				if (static_cast<int>(args.size()) != sig_->arity(name))
					fail_at("arity mismatch: '" + name + "' expects " + std::to_string(sig_->arity(name))
					            + " argument(s), got " + std::to_string(args.size()),
					        t.offset);
				return Term0::apply(name, std::move(args));
			}
			fail("relation symbol '" + t.text + "' used as a term");
		}
		fail(t.type == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
	}

	// L1 formulas

	Formula1 imp1()
	{
		Formula1 l = or1();
		if (accept("->"))
			return Formula1::binary(Op::Implies, l, imp1());
		return l;
	}

	Formula1 or1()
	{
		Formula1 l = and1();
		while (accept("|"))
			l = Formula1::disj(l, and1());
		return l;
	}

	Formula1 and1()
	{
		Formula1 l = unary1();
		while (accept("&"))
			l = Formula1::conj(l, unary1());
		return l;
	}

	Formula1 unary1()
	{
		const Token &t = peek();
		if (accept("~"))
			return Formula1::negate(unary1());
		if (t.type == Tok::Ident && is_keyword(t.text)) {
			Op q = next().text == "forall" ? Op::Forall : Op::Exists;
			if (peek().type != Tok::Ident || is_keyword(peek().text) || parse_var_name(peek().text) >= 0)
				fail("expected a real variable name");
			std::string v = next().text;
			return Formula1::quantify(q, v, formula1());
		}
		if (t.type == Tok::Sym && t.text == "(") {
			if (auto a = attempt<Formula1>(failed1_, [&] { return atom1(); }))
				return *a;
			next();
			Formula1 f = formula1();
			expect(")");
			return f;
		}
		return atom1();
	}

	bool at_relop() const
	{
		for (const char *r : {"=", "<=", "<", ">=", ">", "!="})
			if (is_sym(r))
				return true;
		return false;
	}

	Formula1 relate(const std::string &op, const Term1 &a, const Term1 &b)
	{
		if (op == "=")
			return Formula1::eq(a, b);
		if (op == "<=")
			return Formula1::le(a, b);
		if (op == "<")
			return Formula1::lt(a, b);
		if (op == ">=")
			return Formula1::le(b, a);
		if (op == ">")
			return Formula1::lt(b, a);
		return Formula1::negate(Formula1::eq(a, b));
	}

	Formula1 atom1()
	{
		Term1 l = term1();
		if (!at_relop())
			fail("expected a comparison (=, <=, <, >=, >, !=)");
		std::optional<Formula1> acc;
		while (at_relop()) {
			std::string op = next().text;
			Term1 r = term1();
			Formula1 a = relate(op, l, r);
			acc = acc ? Formula1::conj(*acc, a) : a;
			l = r;
		}
		return *acc;
	}

	Term1 term1()
	{
		Term1 l = mul1();
		for (;;) {
			if (accept("+"))
				l = Term1::add(l, mul1());
			else if (accept("-"))
				l = Term1::sub(l, mul1());
			else
				return l;
		}
	}

	Term1 mul1()
	{
		Term1 l = neg1();
		while (accept("*"))
			l = Term1::mul(l, neg1());
		return l;
	}

	Term1 neg1()
	{
		if (accept("-")) {
			// a literal directly after unary minus is a negative literal
			if (peek().type == Tok::Number) {
				Term1 n = primary1();
				return Term1::num(-n.value());
			}
			return Term1::neg(neg1());
		}
		return primary1();
	}

	Term1 primary1()
	{
		const Token &t = peek();
		if (t.type == Tok::Number) {
			next();
			try {
				return Term1::num(Rational::parse(t.text));
			} catch (const std::exception &e) {
				fail_at(e.what(), t.offset);
			}
		}
		if (t.type == Tok::Ident) {
			if (is_keyword(t.text))
				fail("unexpected keyword '" + t.text + "'");
			if (parse_var_name(t.text) >= 0)
				fail("object variable '" + t.text + "' outside a probability constant");
			next();
			if (is_sym("("))
				fail("L1 has no function symbols");
			return Term1::var(t.text);
		}
		if (t.type == Tok::Sym && t.text == "|") {
			next();
			std::size_t inner_start = peek().offset;
			Formula0 phi = formula0();
			expect("|");
			if (dom_) {
				for (int v : phi.free_vars()) {
					bool in = false;
					for (int d : *dom_)
						in = in || d == v;
					if (!in) {
						// outranks the syntax errors of other readings
						ParseError e("parse error: probability constant uses variable " + var_name(v) +
						                 " outside the team domain",
						             locate(src_, inner_start));
						if (!scope_error_)
							scope_error_ = e;
						throw e;
					}
				}
			}
			return Term1::prob(phi);
		}
		if (accept("(")) {
			Term1 inner = term1();
			expect(")");
			return inner;
		}
		fail(t.type == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
	}

	// propositional

	PropFormula prop_imp()
	{
		PropFormula l = prop_or();
		if (accept("->"))
			return PropFormula::binary(PropFormula::Kind::Implies, l, prop_imp());
		return l;
	}

	PropFormula prop_or()
	{
		PropFormula l = prop_and();
		while (accept("|"))
			l = PropFormula::binary(PropFormula::Kind::Or, l, prop_and());
		return l;
	}

	PropFormula prop_and()
	{
		PropFormula l = prop_unary();
		while (accept("&"))
			l = PropFormula::binary(PropFormula::Kind::And, l, prop_unary());
		return l;
	}

	PropFormula prop_unary()
	{
		const Token &t = peek();
		if (accept("~"))
			return PropFormula::negate(prop_unary());
		if (accept("(")) {
			PropFormula f = prop();
			expect(")");
			return f;
		}
		if (t.type == Tok::Ident && parse_var_name(t.text) >= 0) {
			next();
			return PropFormula::var(parse_var_name(t.text));
		}
		if (t.type == Tok::Ident && (t.text == "true" || t.text == "false")) {
			next();
			return PropFormula::constant(t.text == "true");
		}
		fail(t.type == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
	}

	std::string_view src_;
	std::vector<Token> toks_;
	std::size_t pos_ = 0;
	const Signature *sig_;
	const VarTuple *dom_;
	std::set<std::size_t> failed0_, failed1_;
	std::optional<ParseError> furthest_;
	std::optional<ParseError> scope_error_;
};

} // namespace

Formula0 parse_l0(std::string_view text, const Signature &sig)
{
	Parser p(text, &sig, nullptr);
	return p.run([](Parser &q) { return q.formula0(); });
}

Term0 parse_term0(std::string_view text, const Signature &sig)
{
	Parser p(text, &sig, nullptr);
	return p.run([](Parser &q) { return q.term_or0(); });
}

Formula1 parse_l1(std::string_view text, const Signature &sig, const VarTuple &dom)
{
	Parser p(text, &sig, &dom);
	return p.run([](Parser &q) { return q.formula1(); });
}

PropFormula parse_prop(std::string_view text)
{
	Parser p(text, nullptr, nullptr);
	return p.run([](Parser &q) { return q.prop(); });
}

} // namespace mtl

/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/polynomial.hpp"

#include "mtl/error.hpp"

namespace mtl {

Polynomial::Polynomial(const Rational &c)
{
	if (!c.is_zero())
		terms_[{}] = c;
}

Polynomial Polynomial::variable(const std::string &name)
{
	Polynomial p;
	p.terms_[{{name, 1}}] = Rational(1);
	return p;
}

void Polynomial::add_term(const Monomial &m, const Rational &c)
{
	if (c.is_zero())
		return;
	auto [it, fresh] = terms_.emplace(m, c);
	if (!fresh) {
		it->second += c;
		if (it->second.is_zero())
			terms_.erase(it);
	}
}

Polynomial &Polynomial::operator+=(const Polynomial &b)
{
	for (const auto &[m, c] : b.terms_)
		add_term(m, c);
	return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &b)
{
	for (const auto &[m, c] : b.terms_)
		add_term(m, -c);
	return *this;
}

Polynomial operator*(const Polynomial &a, const Polynomial &b)
{
	Polynomial out;
	for (const auto &[ma, ca] : a.terms_) {
		for (const auto &[mb, cb] : b.terms_) {
			Monomial m = ma;
			for (const auto &[v, e] : mb)
				m[v] += e;
			out.add_term(m, ca * cb);
		}
	}
	return out;
}

Polynomial operator-(const Polynomial &a)
{
	Polynomial out;
	for (const auto &[m, c] : a.terms_)
		out.terms_[m] = -c;
	return out;
}

bool Polynomial::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Rational Polynomial::constant_term() const
{
	auto it = terms_.find({});
	return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::coefficient(const std::string &var) const
{
	auto it = terms_.find({{var, 1}});
	return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree() const
{
	int d = 0;
	for (const auto &[m, c] : terms_) {
		int md = 0;
		for (const auto &[v, e] : m)
			md += e;
		d = std::max(d, md);
	}
	return d;
}

std::set<std::string> Polynomial::variables() const
{
	std::set<std::string> out;
	for (const auto &[m, c] : terms_)
		for (const auto &[v, e] : m)
			out.insert(v);
	return out;
}

namespace {

Rational power(const Rational &x, int e)
{
	Rational r(1);
	for (int i = 0; i < e; ++i)
		r *= x;
	return r;
}

} // namespace

Rational Polynomial::eval(const std::map<std::string, Rational> &point) const
{
	Rational total;
	for (const auto &[m, c] : terms_) {
		Rational t = c;
		for (const auto &[v, e] : m) {
			auto it = point.find(v);
			if (it == point.end())
				throw EvalError("no value for variable '" + v + "'");
			t *= power(it->second, e);
		}
		total += t;
	}
	return total;
}

Polynomial Polynomial::substitute(const std::map<std::string, Rational> &values) const
{
	Polynomial out;
	for (const auto &[m, c] : terms_) {
		Rational k = c;
		Monomial rest;
		for (const auto &[v, e] : m) {
			auto it = values.find(v);
			if (it == values.end())
				rest[v] = e;
			else
				k *= power(it->second, e);
		}
		out.add_term(rest, k);
	}
	return out;
}

Polynomial Polynomial::compose(const std::map<std::string, Polynomial> &images) const
{
	Polynomial out;
	for (const auto &[m, c] : terms_) {
		Polynomial t(c);
		for (const auto &[v, e] : m) {
			auto it = images.find(v);
			const Polynomial base = it == images.end() ? variable(v) : it->second;
			for (int k = 0; k < e; ++k)
				t = t * base;
		}
		out += t;
	}
	return out;
}

std::string Polynomial::str() const
{
	if (terms_.empty())
		return "0";
	std::string out;
	for (const auto &[m, c] : terms_) {
		if (!out.empty())
			out += " + ";
		out += c.str();
		for (const auto &[v, e] : m)
			out += "*" + v + (e > 1 ? "^" + std::to_string(e) : "");
	}
	return out;
}

} // namespace mtl

/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace mtl {

Rational::Rational(long num, long den)
{
	if (den == 0)
		throw std::domain_error("rational with zero denominator");
	q_ = mpq_class(mpz_class(num), mpz_class(den));
	q_.canonicalize();
}

namespace {

bool all_digits(std::string_view s)
{
	if (s.empty())
		return false;
	for (char c : s)
		if (!std::isdigit(static_cast<unsigned char>(c)))
			return false;
	return true;
}

mpz_class pow10(unsigned long e)
{
	mpz_class r;
	mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
	return r;
}

} // namespace

Rational Rational::parse(std::string_view text)
{
	auto bad = [&] { return std::invalid_argument("malformed rational literal '" + std::string(text) + "'"); };
	std::string_view s = text;
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
		s.remove_prefix(1);
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
		s.remove_suffix(1);
	bool neg = false;
	if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
		neg = s.front() == '-';
		s.remove_prefix(1);
	}
	if (s.empty())
		throw bad();

	mpq_class q;
	if (auto slash = s.find('/'); slash != std::string_view::npos) {
		auto n = s.substr(0, slash), d = s.substr(slash + 1);
		if (!all_digits(n) || !all_digits(d))
			throw bad();
		mpz_class den(std::string(d), 10);
		if (den == 0)
			throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
		q = mpq_class(mpz_class(std::string(n), 10), den);
	} else {
		std::string_view mant = s;
		long exp10 = 0;
		if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
			mant = s.substr(0, e);
			auto es = s.substr(e + 1);
			bool eneg = false;
			if (!es.empty() && (es.front() == '-' || es.front() == '+')) {
				eneg = es.front() == '-';
				es.remove_prefix(1);
			}
			if (!all_digits(es) || es.size() > 6)
				throw bad();
			exp10 = std::stol(std::string(es)) * (eneg ? -1 : 1);
		}
		std::string digits;
		long frac = 0;
		if (auto dot = mant.find('.'); dot != std::string_view::npos) {
			auto ip = mant.substr(0, dot), fp = mant.substr(dot + 1);
			if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
				throw bad();
			digits = std::string(ip) + std::string(fp);
			frac = static_cast<long>(fp.size());
		} else {
			if (!all_digits(mant))
				throw bad();
			digits = std::string(mant);
		}
		long e = exp10 - frac;
		mpz_class m(digits, 10);
		if (e >= 0)
			q = mpq_class(m * pow10(static_cast<unsigned long>(e)));
		else
			q = mpq_class(m, pow10(static_cast<unsigned long>(-e)));
	}
	q.canonicalize();
	if (neg)
		q = -q;
	return Rational(q);
}

std::string Rational::str() const
{
	if (q_.get_den() == 1)
		return q_.get_num().get_str();
	return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

bool Rational::is_canonical() const
{
	if (q_.get_den() <= 0)
		return false;
	mpz_class g;
	mpz_gcd(g.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
	return g == 1;
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(q_))); }

Rational Rational::inverse() const
{
	if (is_zero())
		throw std::domain_error("inverse of zero");
	return Rational(mpq_class(1 / q_));
}

Rational &Rational::operator/=(const Rational &b)
{
	if (b.is_zero())
		throw std::domain_error("division by zero");
	q_ /= b.q_;
	return *this;
}

Rational Rational::floor() const
{
	mpz_class r;
	mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
	return Rational(r);
}

Rational Rational::ceil() const
{
	mpz_class r;
	mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
	return Rational(r);
}

std::size_t Rational::hash() const
{
	std::size_t h = std::hash<std::string>{}(q_.get_num().get_str(16));
	return h ^ (std::hash<std::string>{}(q_.get_den().get_str(16)) * 0x9e3779b97f4a7c15ULL);
}

Rational simplest_between(const Rational &lo, const Rational &hi)
{
	if (hi < lo)
		throw std::invalid_argument("simplest_between: empty interval");
	if (lo.sign() <= 0 && hi.sign() >= 0)
		return Rational(0);
	if (hi.sign() < 0)
		return -simplest_between(-hi, -lo);
	Rational c = lo.ceil();
	if (c <= hi)
		return c;
	Rational fl = lo.floor();
	return fl + simplest_between((hi - fl).inverse(), (lo - fl).inverse()).inverse();
}

Rational approximate(double x, const mpz_class &max_den)
{
	mpq_class v(x);
	// convergents h/k
	mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
	mpq_class rest = v;
	Rational best;
	bool have = false;
	for (int iter = 0; iter < 200; ++iter) {
		mpz_class a;
		mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
		mpz_class h2 = a * h1 + h0, k2 = a * k1 + k0;
		if (k2 > max_den)
			break;
		best = Rational(mpq_class(h2, k2));
		have = true;
		h0 = h1; h1 = h2; k0 = k1; k1 = k2;
		mpq_class frac = rest - mpq_class(a);
		if (sgn(frac) == 0)
			break;
		rest = 1 / frac;
	}
	if (!have) {
		mpz_class f;
		mpz_fdiv_q(f.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
		return Rational(f);
	}
	return best;
}

namespace {

// floor(sqrt(x) * 2^bits) for x >= 0, with exactness flag
mpz_class scaled_isqrt(const Rational &x, unsigned bits, bool &exact)
{
	mpz_class a = x.num(), b = x.den();
	exact = mpz_perfect_square_p(a.get_mpz_t()) && mpz_perfect_square_p(b.get_mpz_t());
	// sqrt(a/b) = sqrt(a*b)/b
	mpz_class scaled = a * b;
	mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
	mpz_class r;
	mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
	return r;
}

constexpr unsigned kSqrtBits = 80;

} // namespace

Rational sqrt_lower(const Rational &x)
{
	if (x.sign() < 0)
		throw std::domain_error("sqrt of negative");
	bool exact;
	mpz_class r = scaled_isqrt(x, kSqrtBits, exact);
	if (exact) {
		mpz_class sa, sb;
		mpz_sqrt(sa.get_mpz_t(), x.num().get_mpz_t());
		mpz_sqrt(sb.get_mpz_t(), x.den().get_mpz_t());
		return Rational(mpq_class(sa, sb));
	}
	mpz_class den = x.den();
	mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), kSqrtBits);
	return Rational(mpq_class(r, den));
}

Rational sqrt_upper(const Rational &x)
{
	if (x.sign() < 0)
		throw std::domain_error("sqrt of negative");
	bool exact;
	mpz_class r = scaled_isqrt(x, kSqrtBits, exact);
	if (exact)
		return sqrt_lower(x);
	mpz_class den = x.den();
	mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), kSqrtBits);
	return Rational(mpq_class(r + 1, den));
}

} // namespace mtl

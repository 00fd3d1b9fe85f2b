/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The mtl Authors
 */

#include "mtl/simplex.hpp"

#include <stdexcept>

namespace mtl {

std::size_t LinearSystem::add_var(bool is_nonneg)
{
	nonneg.push_back(is_nonneg);
	for (auto &r : rows)
		r.coeffs.resize(num_vars + 1);
	return num_vars++;
}

void LinearSystem::add(std::vector<Rational> coeffs, Relation rel, Rational rhs)
{
	if (coeffs.size() > num_vars)
		throw std::invalid_argument("constraint has more coefficients than the system has variables");
	coeffs.resize(num_vars);
	rows.push_back({std::move(coeffs), rel, std::move(rhs)});
}

namespace {

class Tableau {
public:
	// rows of [coefficients..., rhs]; basis[i] is the basic column of row i
	std::vector<std::vector<Rational>> t;
	std::vector<std::size_t> basis;
	std::vector<Rational> z;   // reduced costs, z.back() holds the objective value
	std::vector<bool> forbidden;
	std::size_t cols = 0;

	void set_objective(const std::vector<Rational> &c)
	{
		z.assign(cols + 1, Rational(0));
		for (std::size_t j = 0; j < cols; ++j)
			z[j] = c[j];
		for (std::size_t i = 0; i < t.size(); ++i) {
			const Rational &cb = c[basis[i]];
			if (cb.is_zero())
				continue;
			for (std::size_t j = 0; j <= cols; ++j)
				z[j] -= cb * t[i][j];
		}
	}

	void pivot(std::size_t r, std::size_t e)
	{
		Rational inv = t[r][e].inverse();
		for (auto &v : t[r])
			v *= inv;
		for (std::size_t i = 0; i < t.size(); ++i) {
			if (i == r || t[i][e].is_zero())
				continue;
			Rational f = t[i][e];
			for (std::size_t j = 0; j <= cols; ++j)
				if (!t[r][j].is_zero())
					t[i][j] -= f * t[r][j];
		}
		if (!z[e].is_zero()) {
			Rational f = z[e];
			for (std::size_t j = 0; j <= cols; ++j)
				if (!t[r][j].is_zero())
					z[j] -= f * t[r][j];
		}
		basis[r] = e;
	}

	// true on optimum, false when unbounded
	bool run()
	{
		for (;;) {
			std::size_t e = cols;
			for (std::size_t j = 0; j < cols; ++j)
				if (!forbidden[j] && z[j].sign() > 0) {
					e = j;
					break;
				}
			if (e == cols)
				return true;
			std::size_t r = t.size();
			Rational best;
			for (std::size_t i = 0; i < t.size(); ++i) {
				if (t[i][e].sign() <= 0)
					continue;
				Rational ratio = t[i][cols] / t[i][e];
				if (r == t.size() || ratio < best || (ratio == best && basis[i] < basis[r])) {
					r = i;
					best = ratio;
				}
			}
			if (r == t.size())
				return false;
			pivot(r, e);
		}
	}

	// objective value of the current basis: z.back() stores -value
	Rational value() const { return -z[cols]; }
};

} // namespace

LpResult maximize(const LinearSystem &sys, const std::vector<Rational> &c)
{
	const std::size_t n = sys.num_vars;
	// column layout: per variable one column (nonneg) or two (free), then slacks, then artificials
	std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
	std::size_t cols = 0;
	for (std::size_t j = 0; j < n; ++j) {
		pos_col[j] = cols++;
		if (!sys.nonneg[j])
			neg_col[j] = cols++;
	}
	const std::size_t m = sys.rows.size();
	std::vector<std::size_t> slack_col(m, SIZE_MAX);
	for (std::size_t i = 0; i < m; ++i) {
		if (sys.rows[i].rel == Relation::Lt)
			throw std::invalid_argument("maximize does not accept strict constraints");
		if (sys.rows[i].rel == Relation::Le)
			slack_col[i] = cols++;
	}
	const std::size_t first_art = cols;

	Tableau T;
	std::vector<std::vector<Rational>> rows(m);
	std::vector<std::size_t> basis(m, SIZE_MAX);
	std::size_t arts = 0;
	for (std::size_t i = 0; i < m; ++i) {
		const auto &r = sys.rows[i];
		bool flip = r.rhs.sign() < 0;
		auto &row = rows[i];
		row.assign(first_art, Rational(0));
		for (std::size_t j = 0; j < n; ++j) {
			Rational a = flip ? -r.coeffs[j] : r.coeffs[j];
			row[pos_col[j]] = a;
			if (neg_col[j] != SIZE_MAX)
				row[neg_col[j]] = -a;
		}
		if (slack_col[i] != SIZE_MAX) {
			row[slack_col[i]] = flip ? Rational(-1) : Rational(1);
			if (!flip)
				basis[i] = slack_col[i];
		}
		if (basis[i] == SIZE_MAX)
			basis[i] = first_art + arts++;
		row.push_back(flip ? -r.rhs : r.rhs);
	}
	T.cols = first_art + arts;
	for (std::size_t i = 0; i < m; ++i) {
		std::vector<Rational> full(T.cols + 1);
		for (std::size_t j = 0; j < first_art; ++j)
			full[j] = rows[i][j];
		if (basis[i] >= first_art)
			full[basis[i]] = Rational(1);
		full[T.cols] = rows[i][first_art];
		T.t.push_back(std::move(full));
	}
	T.basis = basis;
	T.forbidden.assign(T.cols, false);

	// phase 1
	if (arts > 0) {
		std::vector<Rational> c1(T.cols);
		for (std::size_t j = first_art; j < T.cols; ++j)
			c1[j] = Rational(-1);
		T.set_objective(c1);
		T.run();
		if (T.value().sign() < 0)
			return {LpStatus::Infeasible, {}, {}};
		for (std::size_t i = 0; i < T.t.size();) {
			if (T.basis[i] < first_art) {
				++i;
				continue;
			}
			std::size_t e = first_art;
			for (std::size_t j = 0; j < first_art; ++j)
				if (!T.t[i][j].is_zero()) {
					e = j;
					break;
				}
			if (e < first_art) {
				T.pivot(i, e);
				++i;
			} else {
				T.t.erase(T.t.begin() + static_cast<std::ptrdiff_t>(i));
				T.basis.erase(T.basis.begin() + static_cast<std::ptrdiff_t>(i));
			}
		}
		for (std::size_t j = first_art; j < T.cols; ++j)
			T.forbidden[j] = true;
	}

	// phase 2
	std::vector<Rational> c2(T.cols);
	for (std::size_t j = 0; j < n && j < c.size(); ++j) {
		c2[pos_col[j]] = c[j];
		if (neg_col[j] != SIZE_MAX)
			c2[neg_col[j]] = -c[j];
	}
	T.set_objective(c2);
	if (!T.run())
		return {LpStatus::Unbounded, {}, {}};

	std::vector<Rational> col_value(T.cols);
	for (std::size_t i = 0; i < T.t.size(); ++i)
		col_value[T.basis[i]] = T.t[i][T.cols];
	LpResult res;
	res.status = LpStatus::Optimal;
	res.x.resize(n);
	for (std::size_t j = 0; j < n; ++j) {
		res.x[j] = col_value[pos_col[j]];
		if (neg_col[j] != SIZE_MAX)
			res.x[j] -= col_value[neg_col[j]];
		if (j < c.size())
			res.value += c[j] * res.x[j];
	}
	return res;
}

bool satisfies(const LinearSystem &sys, const std::vector<Rational> &x)
{
	if (x.size() != sys.num_vars)
		return false;
	for (std::size_t j = 0; j < sys.num_vars; ++j)
		if (sys.nonneg[j] && x[j].sign() < 0)
			return false;
	for (const auto &r : sys.rows) {
		Rational lhs;
		for (std::size_t j = 0; j < sys.num_vars; ++j)
			if (!r.coeffs[j].is_zero())
				lhs += r.coeffs[j] * x[j];
		bool ok = r.rel == Relation::Eq ? lhs == r.rhs : r.rel == Relation::Le ? lhs <= r.rhs : lhs < r.rhs;
		if (!ok)
			return false;
	}
	return true;
}

bool verify_certificate(const LinearSystem &sys, const FarkasCertificate &cert)
{
	const auto &y = cert.multipliers;
	if (y.size() != sys.rows.size())
		return false;
	std::vector<Rational> a(sys.num_vars);
	Rational beta;
	bool strict_positive = false;
	for (std::size_t i = 0; i < y.size(); ++i) {
		const auto &r = sys.rows[i];
		if (r.rel != Relation::Eq && y[i].sign() < 0)
			return false;
		if (r.rel == Relation::Lt && y[i].sign() > 0)
			strict_positive = true;
		if (y[i].is_zero())
			continue;
		for (std::size_t j = 0; j < sys.num_vars; ++j)
			a[j] += y[i] * r.coeffs[j];
		beta += y[i] * r.rhs;
	}
	for (std::size_t j = 0; j < sys.num_vars; ++j) {
		if (sys.nonneg[j] ? a[j].sign() < 0 : !a[j].is_zero())
			return false;
	}
	return beta.sign() < 0 || (beta.is_zero() && strict_positive);
}

LinearResult solve_linear(const LinearSystem &sys)
{
	const std::size_t n = sys.num_vars;
	bool strict = false;
	for (const auto &r : sys.rows)
		strict = strict || r.rel == Relation::Lt;

	LinearResult out;
	if (!strict) {
		LpResult lp = maximize(sys, {});
		if (lp.status == LpStatus::Optimal) {
			out.feasible = true;
			out.solution = lp.x;
		}
	} else {
		// maximize a common slack t on the strict rows, capped at 1
		LinearSystem relaxed = sys;
		std::size_t t = relaxed.add_var(false);
		for (auto &r : relaxed.rows) {
			if (r.rel == Relation::Lt) {
				r.rel = Relation::Le;
				r.coeffs[t] = Rational(1);
			}
		}
		std::vector<Rational> unit(t + 1);
		unit[t] = Rational(1);
		relaxed.add(unit, Relation::Le, Rational(1));
		LpResult lp = maximize(relaxed, unit);
		if (lp.status == LpStatus::Optimal && lp.value.sign() > 0) {
			out.feasible = true;
			out.solution.assign(lp.x.begin(), lp.x.begin() + static_cast<std::ptrdiff_t>(n));
		}
	}
	if (out.feasible) {
		if (!satisfies(sys, out.solution))
			throw std::logic_error("simplex produced a point that violates the system");
		return out;
	}

	// certificate search: y >= 0 on inequality rows, y^T A = 0 (free) / >= 0 (nonneg),
	// y^T b <= 0 and sum_{strict} y - y^T b = 1
	const std::size_t m = sys.rows.size();
	LinearSystem dual(m);
	for (std::size_t i = 0; i < m; ++i)
		dual.nonneg[i] = sys.rows[i].rel != Relation::Eq;
	for (std::size_t j = 0; j < n; ++j) {
		std::vector<Rational> col(m);
		for (std::size_t i = 0; i < m; ++i)
			col[i] = sys.nonneg[j] ? -sys.rows[i].coeffs[j] : sys.rows[i].coeffs[j];
		dual.add(col, sys.nonneg[j] ? Relation::Le : Relation::Eq, Rational(0));
	}
	std::vector<Rational> b(m), norm(m);
	for (std::size_t i = 0; i < m; ++i) {
		b[i] = sys.rows[i].rhs;
		norm[i] = (sys.rows[i].rel == Relation::Lt ? Rational(1) : Rational(0)) - b[i];
	}
	dual.add(b, Relation::Le, Rational(0));
	dual.add(norm, Relation::Eq, Rational(1));
	LpResult lp = maximize(dual, {});
	if (lp.status != LpStatus::Optimal)
		throw std::logic_error("simplex found neither a solution nor an infeasibility certificate");
	out.certificate.multipliers = lp.x;
	if (!verify_certificate(sys, out.certificate))
		throw std::logic_error("simplex produced an invalid infeasibility certificate");
	return out;
}

} // namespace mtl

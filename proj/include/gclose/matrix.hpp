#pragma once

// Dense integer matrices, Smith normal form, and column Hermite form.

#include "integer.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gclose {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows, std::size_t cols_if_empty = 0)
    {
        const std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
        IntMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw Error(ErrorCode::dimension_mismatch, "ragged matrix rows");
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    static IntMatrix from_columns(const std::vector<std::vector<Int>>& columns, std::size_t rows_if_empty = 0)
    {
        const std::size_t rows = columns.empty() ? rows_if_empty : columns.front().size();
        IntMatrix m(rows, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != rows)
                throw Error(ErrorCode::dimension_mismatch, "ragged matrix columns");
            for (std::size_t i = 0; i < rows; ++i)
                m(i, j) = columns[j][i];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<Int> row(std::size_t i) const { return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_}; }

    std::vector<Int> column(std::size_t j) const
    {
        std::vector<Int> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            c[i] = (*this)(i, j);
        return c;
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }

    void swap_cols(std::size_t a, std::size_t b)
    {
        for (std::size_t i = 0; i < rows_; ++i)
            std::swap((*this)(i, a), (*this)(i, b));
    }

    // row[dst] += factor * row[src]
    void add_row(std::size_t dst, std::size_t src, const Int& factor)
    {
        if (factor == 0)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            (*this)(dst, j) += factor * (*this)(src, j);
    }

    void add_col(std::size_t dst, std::size_t src, const Int& factor)
    {
        if (factor == 0)
            return;
        for (std::size_t i = 0; i < rows_; ++i)
            (*this)(i, dst) += factor * (*this)(i, src);
    }

    void negate_row(std::size_t i)
    {
        for (std::size_t j = 0; j < cols_; ++j)
            (*this)(i, j) = -(*this)(i, j);
    }

    void negate_col(std::size_t j)
    {
        for (std::size_t i = 0; i < rows_; ++i)
            (*this)(i, j) = -(*this)(i, j);
    }

    bool is_zero() const
    {
        for (const Int& x : data_)
            if (x != 0)
                return false;
        return true;
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

    friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y)
    {
        if (x.cols_ != y.rows_)
            throw Error(ErrorCode::dimension_mismatch, "matrix product dimension mismatch");
        IntMatrix out(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (x(i, k) == 0)
                    continue;
                for (std::size_t j = 0; j < y.cols_; ++j)
                    out(i, j) += x(i, k) * y(k, j);
            }
        return out;
    }

    std::string to_string() const
    {
        std::string s;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i)
                s += ";";
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j)
                    s += ",";
                s += (*this)(i, j).str();
            }
        }
        return s;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

// "a,b;c,d" (rows separated by ';'). An empty string is a 0 x 0 matrix.
inline IntMatrix parse_matrix(std::string_view text)
{
    std::vector<std::vector<Int>> rows;
    if (text.empty())
        return {};
    std::size_t start = 0;
    while (true) {
        const std::size_t semi = text.find(';', start);
        const std::string_view row_text = text.substr(start, semi == text.npos ? text.npos : semi - start);
        std::vector<Int> row;
        std::size_t cs = 0;
        while (true) {
            const std::size_t comma = row_text.find(',', cs);
            std::string_view cell = row_text.substr(cs, comma == row_text.npos ? row_text.npos : comma - cs);
            while (!cell.empty() && cell.front() == ' ')
                cell.remove_prefix(1);
            while (!cell.empty() && cell.back() == ' ')
                cell.remove_suffix(1);
            row.push_back(parse_int_or_throw(cell, start + cs));
            if (comma == row_text.npos)
                break;
            cs = comma + 1;
        }
        if (!rows.empty() && rows.front().size() != row.size())
            throw ParseError("ragged matrix row", start);
        rows.push_back(std::move(row));
        if (semi == text.npos)
            break;
        start = semi + 1;
    }
    return IntMatrix::from_rows(rows);
}

// Fraction-free Bareiss elimination.
inline Int determinant(IntMatrix m)
{
    if (m.rows() != m.cols())
        throw Error(ErrorCode::dimension_mismatch, "determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t swap_with = k + 1;
            while (swap_with < n && m(swap_with, k) == 0)
                ++swap_with;
            if (swap_with == n)
                return 0;
            m.swap_rows(k, swap_with);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

struct SmithForm {
    IntMatrix U; // rows x rows, unimodular
    IntMatrix D; // rows x cols, diagonal
    IntMatrix V; // cols x cols, unimodular

    std::vector<Int> diagonal() const
    {
        std::vector<Int> d;
        for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
            d.push_back(D(i, i));
        return d;
    }

    // Number of nonzero diagonal entries.
    std::size_t rank() const
    {
        std::size_t r = 0;
        for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
            if (D(i, i) != 0)
                ++r;
        return r;
    }
};

namespace detail {

// Postcondition check, compiled in when GCLOSE_VERIFY_SNF is defined (the test build does).
inline void verify_smith_form(const SmithForm& f, const IntMatrix& M)
{
    auto fail = [](const char* what) { throw std::logic_error(std::string("smith_normal_form: ") + what); };
    if (f.U * M * f.V != f.D)
        fail("D != U*M*V");
    if (abs(determinant(f.U)) != 1 || abs(determinant(f.V)) != 1)
        fail("transform is not unimodular");
    for (std::size_t i = 0; i < f.D.rows(); ++i)
        for (std::size_t j = 0; j < f.D.cols(); ++j)
            if (i != j && f.D(i, j) != 0)
                fail("D is not diagonal");
    const auto d = f.diagonal();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 0)
            fail("negative invariant factor");
        if (i + 1 < d.size() && !(d[i + 1] == 0 || (d[i] != 0 && d[i + 1] % d[i] == 0)))
            fail("divisibility chain broken");
    }
}

} // namespace detail

// D = U * M * V with d_i | d_{i+1}. Pivot: smallest nonzero |entry| in the
// active block, ties to the lowest (row, col).
inline SmithForm smith_normal_form(const IntMatrix& M)
{
    SmithForm f{IntMatrix::identity(M.rows()), M, IntMatrix::identity(M.cols())};
    IntMatrix& D = f.D;
    const std::size_t rows = M.rows();
    const std::size_t cols = M.cols();

    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        while (true) {
            // locate pivot
            bool found = false;
            std::size_t pi = t, pj = t;
            Int best;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j) {
                    if (D(i, j) == 0)
                        continue;
                    const Int v = abs(D(i, j));
                    if (!found || v < best) {
                        found = true;
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            if (!found)
                return f;
            if (pi != t) {
                D.swap_rows(t, pi);
                f.U.swap_rows(t, pi);
            }
            if (pj != t) {
                D.swap_cols(t, pj);
                f.V.swap_cols(t, pj);
            }

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (D(i, t) == 0)
                    continue;
                const Int q = floor_div(D(i, t), D(t, t));
                D.add_row(i, t, -q);
                f.U.add_row(i, t, -q);
                if (D(i, t) != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (D(t, j) == 0)
                    continue;
                const Int q = floor_div(D(t, j), D(t, t));
                D.add_col(j, t, -q);
                f.V.add_col(j, t, -q);
                if (D(t, j) != 0)
                    clean = false;
            }
            if (!clean)
                continue;

            // divisibility: fold an offending row into row t and go again
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (D(i, j) % D(t, t) != 0) {
                        D.add_row(t, i, 1);
                        f.U.add_row(t, i, 1);
                        divides = false;
                        break;
                    }
            if (!divides)
                continue;
            if (D(t, t) < 0) {
                D.negate_row(t);
                f.U.negate_row(t);
            }
            break;
        }
    }
#ifdef GCLOSE_VERIFY_SNF
    detail::verify_smith_form(f, M);
#endif
    return f;
}

// Column Hermite normal form of the lattice spanned by the given columns:
// lower-triangular-by-pivot, positive pivots, entries left of each pivot
// reduced into [0, pivot). Zero columns are dropped. Unique per lattice.
inline std::vector<std::vector<Int>> column_hermite_basis(const std::vector<std::vector<Int>>& columns, std::size_t dim)
{
    std::vector<std::vector<Int>> cols;
    for (const auto& c : columns) {
        if (c.size() != dim)
            throw Error(ErrorCode::dimension_mismatch, "lattice generator of wrong dimension");
        cols.push_back(c);
    }
    std::vector<std::vector<Int>> basis;
    std::vector<std::size_t> pivot_rows;
    for (std::size_t r = 0; r < dim && !cols.empty(); ++r) {
        // Euclid on row r across the remaining columns
        while (true) {
            std::size_t best = cols.size();
            for (std::size_t j = 0; j < cols.size(); ++j)
                if (cols[j][r] != 0 && (best == cols.size() || abs(cols[j][r]) < abs(cols[best][r])))
                    best = j;
            if (best == cols.size())
                break;
            bool reduced = false;
            for (std::size_t j = 0; j < cols.size(); ++j) {
                if (j == best || cols[j][r] == 0)
                    continue;
                const Int q = floor_div(cols[j][r], cols[best][r]);
                for (std::size_t i = 0; i < dim; ++i)
                    cols[j][i] -= q * cols[best][i];
                reduced = true;
            }
            if (reduced)
                continue;
            std::vector<Int> pivot = std::move(cols[best]);
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(best));
            if (pivot[r] < 0)
                for (Int& x : pivot)
                    x = -x;
            basis.push_back(std::move(pivot));
            pivot_rows.push_back(r);
            break;
        }
        // drop columns that became zero
        std::erase_if(cols, [](const std::vector<Int>& c) {
            for (const Int& x : c)
                if (x != 0)
                    return false;
            return true;
        });
    }
    // reduce earlier pivot columns by later ones
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const std::size_t r = pivot_rows[k];
        for (std::size_t j = 0; j < k; ++j) {
            const Int q = floor_div(basis[j][r], basis[k][r]);
            if (q == 0)
                continue;
            for (std::size_t i = 0; i < dim; ++i)
                basis[j][i] -= q * basis[k][i];
        }
    }
    return basis;
}

// Solves basis * coeffs = v for a column Hermite basis; nullopt when v is not in the lattice.
inline std::optional<std::vector<Int>> hermite_coordinates(const std::vector<std::vector<Int>>& basis, std::vector<Int> v)
{
    std::vector<Int> coeffs(basis.size());
    std::size_t next_row = 0;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        std::size_t r = next_row;
        while (basis[k][r] == 0)
            ++r;
        for (std::size_t i = next_row; i < r; ++i)
            if (v[i] != 0)
                return std::nullopt;
        if (v[r] % basis[k][r] != 0)
            return std::nullopt;
        coeffs[k] = v[r] / basis[k][r];
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] -= coeffs[k] * basis[k][i];
        next_row = r + 1;
    }
    for (const Int& x : v)
        if (x != 0)
            return std::nullopt;
    return coeffs;
}

// Integer kernel {x : M x = 0} as a list of basis vectors.
inline std::vector<std::vector<Int>> integer_kernel(const IntMatrix& M)
{
    const SmithForm f = smith_normal_form(M);
    std::vector<std::vector<Int>> basis;
    for (std::size_t j = f.rank(); j < M.cols(); ++j)
        basis.push_back(f.V.column(j));
    return basis;
}

} // namespace gclose

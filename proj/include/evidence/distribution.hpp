#pragma once

#include "evidence/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evidence {

// Probability distribution over an ordered finite set of names.
class Distribution {
public:
    Distribution(std::vector<std::string> support, std::vector<Rational> masses);

    static Distribution uniform(std::vector<std::string> support);
    static Distribution point(std::vector<std::string> support, std::string_view at);
    static Distribution from_map(std::vector<std::string> support,
                                 const std::map<std::string, Rational>& masses);

    const std::vector<std::string>& support() const { return support_; }
    const std::vector<Rational>& masses() const { return masses_; }
    size_t size() const { return support_.size(); }
    const Rational& at(size_t i) const { return masses_.at(i); }
    const Rational& mass(std::string_view name) const;
    std::optional<size_t> index_of(std::string_view name) const;
    Rational measure(const std::vector<std::string>& names) const;
    Rational measure(const std::vector<bool>& mask) const;

    friend bool operator==(const Distribution& a, const Distribution& b) {
        return a.support_ == b.support_ && a.masses_ == b.masses_;
    }

private:
    std::vector<std::string> support_;
    std::vector<Rational> masses_;
    std::map<std::string, size_t, std::less<>> index_;
};

// c(h) = a(h) b(h) / sum a(h') b(h'); throws OrthogonalMeasures on a zero normalizer.
Distribution dempster_combine(const Distribution& a, const Distribution& b);

class JointDistribution {
public:
    JointDistribution(std::vector<std::string> rows, std::vector<std::string> cols,
                      std::vector<std::vector<Rational>> mass);

    const std::vector<std::string>& rows() const { return rows_; }
    const std::vector<std::string>& cols() const { return cols_; }
    const Rational& mass(size_t r, size_t c) const { return mass_.at(r).at(c); }
    Rational row_marginal(size_t r) const;
    Rational col_marginal(size_t c) const;

private:
    std::vector<std::string> rows_;
    std::vector<std::string> cols_;
    std::vector<std::vector<Rational>> mass_;
};

void check_unique_names(const std::vector<std::string>& names, const char* what);

} // namespace evidence

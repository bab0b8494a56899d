#include "evidence/distribution.hpp"

#include "evidence/errors.hpp"

#include <algorithm>
#include <set>

namespace evidence {

void check_unique_names(const std::vector<std::string>& names, const char* what) {
    std::set<std::string_view> seen;
    for (const auto& n : names) {
        if (n.empty()) throw InvalidStructure(std::string("empty name among ") + what);
        if (!seen.insert(n).second)
            throw InvalidStructure(std::string("duplicate ") + what + " '" + n + "'");
    }
}

Distribution::Distribution(std::vector<std::string> support, std::vector<Rational> masses)
    : support_(std::move(support)), masses_(std::move(masses)) {
    if (support_.empty()) throw InvalidStructure("distribution over an empty set");
    if (support_.size() != masses_.size())
        throw InvalidStructure("distribution support and masses differ in length");
    check_unique_names(support_, "support element");
    Rational total;
    for (size_t i = 0; i < masses_.size(); ++i) {
        if (masses_[i].sign() < 0)
            throw InvalidStructure("negative mass " + masses_[i].str() + " at '" + support_[i] + "'");
        total += masses_[i];
    }
    if (total != 1) throw InvalidStructure("masses sum to " + total.str() + ", not 1");
    for (size_t i = 0; i < support_.size(); ++i) index_.emplace(support_[i], i);
}

Distribution Distribution::uniform(std::vector<std::string> support) {
    const size_t n = support.size();
    std::vector<Rational> m(n, n ? Rational(BigInt(1), BigInt(static_cast<unsigned long>(n))) : Rational());
    return Distribution(std::move(support), std::move(m));
}

Distribution Distribution::point(std::vector<std::string> support, std::string_view at) {
    std::vector<Rational> m(support.size());
    bool found = false;
    for (size_t i = 0; i < support.size(); ++i)
        if (support[i] == at) {
            m[i] = 1;
            found = true;
        }
    if (!found) throw UnknownName("unknown name '" + std::string(at) + "'");
    return Distribution(std::move(support), std::move(m));
}

Distribution Distribution::from_map(std::vector<std::string> support,
                                    const std::map<std::string, Rational>& masses) {
    std::vector<Rational> m;
    m.reserve(support.size());
    for (const auto& s : support) {
        auto it = masses.find(s);
        m.push_back(it == masses.end() ? Rational() : it->second);
    }
    for (const auto& [name, _] : masses)
        if (std::find(support.begin(), support.end(), name) == support.end())
            throw UnknownName("unknown name '" + name + "'");
    return Distribution(std::move(support), std::move(m));
}

std::optional<size_t> Distribution::index_of(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const Rational& Distribution::mass(std::string_view name) const {
    auto i = index_of(name);
    if (!i) throw UnknownName("unknown name '" + std::string(name) + "'");
    return masses_[*i];
}

Rational Distribution::measure(const std::vector<std::string>& names) const {
    Rational r;
    for (const auto& n : names) r += mass(n);
    return r;
}

Rational Distribution::measure(const std::vector<bool>& mask) const {
    Rational r;
    for (size_t i = 0; i < mask.size() && i < masses_.size(); ++i)
        if (mask[i]) r += masses_[i];
    return r;
}

Distribution dempster_combine(const Distribution& a, const Distribution& b) {
    if (a.support() != b.support())
        throw InvalidStructure("combined distributions must share the same ordered support");
    std::vector<Rational> c(a.size());
    Rational norm;
    for (size_t i = 0; i < a.size(); ++i) {
        c[i] = a.at(i) * b.at(i);
        norm += c[i];
    }
    if (norm.is_zero()) throw OrthogonalMeasures("measures are orthogonal: normalizer is 0");
    for (auto& v : c) v /= norm;
    return Distribution(a.support(), std::move(c));
}

JointDistribution::JointDistribution(std::vector<std::string> rows, std::vector<std::string> cols,
                                     std::vector<std::vector<Rational>> mass)
    : rows_(std::move(rows)), cols_(std::move(cols)), mass_(std::move(mass)) {
    check_unique_names(rows_, "row");
    check_unique_names(cols_, "column");
    if (rows_.empty() || cols_.empty()) throw InvalidStructure("empty joint distribution");
    if (mass_.size() != rows_.size()) throw InvalidStructure("joint row count mismatch");
    Rational total;
    for (const auto& r : mass_) {
        if (r.size() != cols_.size()) throw InvalidStructure("joint column count mismatch");
        for (const auto& v : r) {
            if (v.sign() < 0) throw InvalidStructure("negative joint mass");
            total += v;
        }
    }
    if (total != 1) throw InvalidStructure("joint masses sum to " + total.str());
}

Rational JointDistribution::row_marginal(size_t r) const {
    Rational s;
    for (const auto& v : mass_.at(r)) s += v;
    return s;
}

Rational JointDistribution::col_marginal(size_t c) const {
    Rational s;
    for (const auto& r : mass_) s += r.at(c);
    return s;
}

} // namespace evidence

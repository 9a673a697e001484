#include "hur/partition.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <sstream>

namespace hur {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw validation_error("partition has no parts");
    for (int p : parts_) {
        if (p < 1) throw validation_error("partition entry " + std::to_string(p) + " is not positive");
    }
    std::sort(parts_.begin(), parts_.end(), std::greater<int>());
    degree_ = std::accumulate(parts_.begin(), parts_.end(), 0);
    q_ = static_cast<int>(std::count_if(parts_.begin(), parts_.end(), [](int p) { return p >= 2; }));
}

namespace {

long parse_int(const std::string& token, const std::string& what) {
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(token, &pos);
    } catch (const std::exception&) {
        throw parse_error("bad " + what + " '" + token + "'");
    }
    if (pos != token.size()) throw parse_error("bad " + what + " '" + token + "'");
    if (v < 1 || v > 1000000) throw parse_error(what + " '" + token + "' out of range");
    return v;
}

std::string strip(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '[' && c != ']') out.push_back(c);
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Partition Partition::parse(const std::string& text) {
    std::string body = strip(text);
    if (body.empty()) throw parse_error("empty partition");
    std::vector<int> parts;
    for (const std::string& entry : split(body, ',')) {
        if (entry.empty()) throw parse_error("empty entry in partition '" + text + "'");
        auto caret = entry.find('^');
        if (caret == std::string::npos) {
            parts.push_back(static_cast<int>(parse_int(entry, "entry")));
        } else {
            long v = parse_int(entry.substr(0, caret), "entry");
            long m = parse_int(entry.substr(caret + 1), "exponent");
            if (m > 10000) throw parse_error("exponent '" + entry + "' out of range");
            parts.insert(parts.end(), static_cast<size_t>(m), static_cast<int>(v));
        }
    }
    return Partition(std::move(parts));
}

int Partition::smallest_big_part() const {
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
        if (*it >= 2) return *it;
    }
    throw validation_error("trivial partition has no part >= 2");
}

std::string Partition::str() const {
    std::ostringstream out;
    size_t i = 0;
    bool first = true;
    while (i < parts_.size()) {
        size_t j = i;
        while (j < parts_.size() && parts_[j] == parts_[i]) ++j;
        size_t run = j - i;
        if (!first) out << ',';
        first = false;
        if (parts_[i] == 1 && run >= 2) {
            out << "1^" << run;
            i = j;
        } else {
            out << parts_[i];
            ++i;
        }
    }
    return out.str();
}

std::string Partition::bracket_str() const { return "[" + str() + "]"; }

std::vector<Partition> all_partitions(int d) {
    std::vector<Partition> out;
    if (d < 1) return out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            cur.push_back(p);
            rec(remaining - p, p);
            cur.pop_back();
        }
    };
    rec(d, d);
    return out;
}

std::vector<Partition> nontrivial_partitions(int d) {
    std::vector<Partition> out = all_partitions(d);
    std::erase_if(out, [](const Partition& p) { return !p.nontrivial(); });
    return out;
}

BranchDatum::BranchDatum(int degree, std::vector<Partition> partitions)
    : degree_(degree), partitions_(std::move(partitions)) {
    if (degree_ < 1) throw validation_error("degree must be positive");
    std::string bad;
    for (size_t i = 0; i < partitions_.size(); ++i) {
        if (partitions_[i].degree() != degree_)
            bad += (bad.empty() ? "" : ", ") + std::string("partition ") + std::to_string(i) + " has degree " +
                   std::to_string(partitions_[i].degree());
        else if (!partitions_[i].nontrivial())
            bad += (bad.empty() ? "" : ", ") + std::string("partition ") + std::to_string(i) + " is trivial";
    }
    if (!bad.empty()) throw validation_error("invalid datum of degree " + std::to_string(degree_) + ": " + bad);
    std::sort(partitions_.begin(), partitions_.end(), std::greater<Partition>());
    nu_ = 0;
    for (const Partition& p : partitions_) nu_ += p.nu();
}

BranchDatum BranchDatum::parse(const std::string& text) {
    std::string body = text;
    std::optional<int> stated;
    auto colon = body.find(':');
    if (colon != std::string::npos) {
        stated = static_cast<int>(parse_int(strip(body.substr(0, colon)), "degree"));
        body = body.substr(colon + 1);
    }
    std::vector<Partition> parts;
    for (const std::string& chunk : split(body, ';')) parts.push_back(Partition::parse(chunk));
    if (parts.empty()) throw parse_error("datum has no partitions");
    int degree = stated.value_or(parts.front().degree());
    return BranchDatum(degree, std::move(parts));
}

int BranchDatum::min_length() const {
    int m = degree_;  // any partition length is <= degree
    for (const Partition& p : partitions_) m = std::min(m, p.length());
    return m;
}

std::string BranchDatum::str() const {
    std::ostringstream out;
    out << degree_ << ": ";
    for (size_t i = 0; i < partitions_.size(); ++i) {
        if (i) out << "; ";
        out << partitions_[i].str();
    }
    return out.str();
}

std::string BranchDatum::set_str() const {
    std::ostringstream out;
    out << '{';
    for (size_t i = 0; i < partitions_.size(); ++i) {
        if (i) out << ", ";
        out << partitions_[i].bracket_str();
    }
    out << '}';
    return out.str();
}

bool constructive_applies(const BranchDatum& datum) {
    return datum.degree() >= 3 && datum.k() >= 3 && datum.candidate_sphere() &&
           datum.k() >= datum.min_length() + 2;
}

DatumReport validate(const BranchDatum& datum) {
    DatumReport rep;
    rep.degree = datum.degree();
    rep.k = datum.k();
    rep.nu = datum.nu();
    rep.candidate_sphere = datum.candidate_sphere();
    rep.genus_consistent = datum.genus_consistent();
    rep.constructive_eligible = constructive_applies(datum);
    if (rep.nu % 2 == 0) rep.genus = (rep.nu - 2 * rep.degree + 2) / 2;
    rep.zheng = is_zheng_exceptional(datum);
    return rep;
}

namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

int min_prime_factor(int n) {
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

}  // namespace

BranchDatum zheng_family(int d_prime, int d_dblprime) {
    if (!is_prime(d_prime)) throw precondition_error("d' = " + std::to_string(d_prime) + " is not prime");
    if (d_dblprime <= 2) throw precondition_error("d'' must exceed 2");
    int d = d_prime * d_dblprime;
    if (min_prime_factor(d) != d_prime)
        throw precondition_error("d' = " + std::to_string(d_prime) + " is not the minimal prime factor of " +
                                 std::to_string(d));
    std::vector<Partition> parts;
    parts.push_back(Partition(std::vector<int>(d_dblprime, d_prime)));
    parts.push_back(parts.front());
    {
        std::vector<int> third{d_dblprime + 1};
        third.insert(third.end(), static_cast<size_t>(d - d_dblprime - 1), 1);
        parts.push_back(Partition(std::move(third)));
    }
    std::vector<int> transposition{2};
    transposition.insert(transposition.end(), static_cast<size_t>(d - 2), 1);
    for (int i = 0; i < d_dblprime - 2; ++i) parts.push_back(Partition(transposition));
    return BranchDatum(d, std::move(parts));
}

std::optional<std::pair<int, int>> is_zheng_exceptional(const BranchDatum& datum) {
    int d = datum.degree();
    if (d < 6) return std::nullopt;
    int dp = min_prime_factor(d);
    int dpp = d / dp;
    if (dpp <= 2) return std::nullopt;
    if (datum == zheng_family(dp, dpp)) return std::make_pair(dp, dpp);
    return std::nullopt;
}

}  // namespace hur

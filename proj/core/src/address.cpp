#include "topogen/address.hpp"

#include <algorithm>
#include <sstream>

#include "topogen/common.hpp"

namespace topogen {

namespace {

// Smallest w with per = w^j; classic failure-function-free check is fine at
// these sizes.
Word primitive_root(const Word& per) {
    const std::size_t n = per.size();
    for (std::size_t len = 1; len <= n / 2; ++len) {
        if (n % len != 0) continue;
        bool ok = true;
        for (std::size_t i = len; i < n && ok; ++i) ok = per[i] == per[i - len];
        if (ok) return Word(per.begin(), per.begin() + len);
    }
    return per;
}

Word parse_digits(const std::string& chunk, bool comma_mode) {
    Word out;
    if (chunk.empty()) return out;
    if (comma_mode) {
        std::stringstream ss(chunk);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) throw UsageError("empty digit in address: '" + chunk + "'");
            std::size_t pos = 0;
            int v = 0;
            try {
                v = std::stoi(item, &pos);
            } catch (const std::exception&) {
                throw UsageError("bad digit '" + item + "' in address");
            }
            if (pos != item.size() || v < 0) throw UsageError("bad digit '" + item + "' in address");
            out.push_back(v);
        }
    } else {
        for (char c : chunk) {
            if (c < '0' || c > '9') throw UsageError(std::string("bad digit '") + c + "' in address");
            out.push_back(c - '0');
        }
    }
    return out;
}

}  // namespace

PreperiodicAddress::PreperiodicAddress(Word preperiod, Word period)
    : pre_(std::move(preperiod)), per_(std::move(period)) {
    if (per_.empty()) throw UsageError("address period must be nonempty");
    for (int d : pre_)
        if (d < 0) throw UsageError("negative digit in address");
    for (int d : per_)
        if (d < 0) throw UsageError("negative digit in address");
    per_ = primitive_root(per_);
    // Slide the preperiod/period boundary left as far as it goes.
    while (!pre_.empty() && pre_.back() == per_.back()) {
        pre_.pop_back();
        std::rotate(per_.begin(), per_.end() - 1, per_.end());
    }
    per_ = primitive_root(per_);
}

PreperiodicAddress PreperiodicAddress::parse(const std::string& text) {
    const auto open = text.find('(');
    const auto close = text.find(')');
    if (open == std::string::npos || close == std::string::npos || close < open ||
        close != text.size() - 1)
        throw UsageError("address must look like 'pre(period)': got '" + text + "'");
    // a comma anywhere selects the multi-digit form for both chunks
    const bool comma_mode = text.find(',') != std::string::npos;
    Word pre = parse_digits(text.substr(0, open), comma_mode);
    Word per = parse_digits(text.substr(open + 1, close - open - 1), comma_mode);
    if (per.empty()) throw UsageError("address period must be nonempty: '" + text + "'");
    return PreperiodicAddress(std::move(pre), std::move(per));
}

int PreperiodicAddress::digit_at(std::size_t n) const {
    if (n < pre_.size()) return pre_[n];
    return per_[(n - pre_.size()) % per_.size()];
}

int PreperiodicAddress::min_alphabet() const {
    int m = 0;
    for (int d : pre_) m = std::max(m, d + 1);
    for (int d : per_) m = std::max(m, d + 1);
    return m;
}

PreperiodicAddress PreperiodicAddress::prepend(int digit) const {
    Word pre;
    pre.reserve(pre_.size() + 1);
    pre.push_back(digit);
    pre.insert(pre.end(), pre_.begin(), pre_.end());
    return PreperiodicAddress(std::move(pre), per_);
}

PreperiodicAddress PreperiodicAddress::shift() const {
    if (!pre_.empty()) return PreperiodicAddress(Word(pre_.begin() + 1, pre_.end()), per_);
    Word per = per_;
    std::rotate(per.begin(), per.begin() + 1, per.end());
    return PreperiodicAddress({}, std::move(per));
}

Word PreperiodicAddress::prefix(std::size_t n) const {
    Word out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = digit_at(i);
    return out;
}

std::string PreperiodicAddress::str() const {
    const bool wide = min_alphabet() > 10;
    auto join = [&](const Word& w) {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (wide && i) s += ',';
            s += std::to_string(w[i]);
        }
        return s;
    };
    std::string out = join(pre_) + "(" + join(per_);
    // the multi-digit form must carry at least one comma so parse can tell
    // "10" from "1,0"; singleton chunks get a trailing one
    if (wide && pre_.size() < 2 && per_.size() < 2) out += ',';
    return out + ")";
}

}  // namespace topogen

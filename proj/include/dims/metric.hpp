#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dims/codec.hpp"
#include "dims/error.hpp"

namespace dims {

using ObjectId = std::uint64_t;

/// An opaque point in a metric space: a stable id plus either a string of
/// unicode scalar values or a fixed-dimension vector.
struct MetricObject {
    ObjectId id = 0;
    std::variant<std::u32string, std::vector<double>> payload;

    bool is_text() const { return payload.index() == 0; }
    const std::u32string& text() const { return std::get<0>(payload); }
    const std::vector<double>& vec() const { return std::get<1>(payload); }

    bool same_payload(const MetricObject& other) const { return payload == other.payload; }
};

inline MetricObject make_text_object(ObjectId id, std::u32string text) {
    return MetricObject{id, std::move(text)};
}

inline MetricObject make_vector_object(ObjectId id, std::vector<double> v) {
    return MetricObject{id, std::move(v)};
}

// --- UTF-8 <-> unicode scalar values -----------------------------------------

inline std::u32string utf8_to_u32(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        char32_t cp = 0;
        int extra = 0;
        if (c < 0x80) {
            cp = c;
        } else if ((c >> 5) == 0x6) {
            cp = c & 0x1f;
            extra = 1;
        } else if ((c >> 4) == 0xe) {
            cp = c & 0x0f;
            extra = 2;
        } else if ((c >> 3) == 0x1e) {
            cp = c & 0x07;
            extra = 3;
        } else {
            throw ParseError("invalid UTF-8 lead byte at offset " + std::to_string(i));
        }
        if (i + extra >= s.size()) throw ParseError("truncated UTF-8 sequence at offset " + std::to_string(i));
        for (int k = 1; k <= extra; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc >> 6) != 0x2) throw ParseError("invalid UTF-8 continuation at offset " + std::to_string(i + k));
            cp = (cp << 6) | (cc & 0x3f);
        }
        i += extra + 1;
        out.push_back(cp);
    }
    return out;
}

inline std::string u32_to_utf8(const std::u32string& s) {
    std::string out;
    for (char32_t cp : s) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else {
            out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        }
    }
    return out;
}

// --- Metric -------------------------------------------------------------------

enum class MetricKind : std::uint8_t { EditDistance = 0, L1Norm = 1, L2Norm = 2 };

inline const char* metric_kind_name(MetricKind k) {
    switch (k) {
        case MetricKind::EditDistance: return "edit";
        case MetricKind::L1Norm: return "l1";
        case MetricKind::L2Norm: return "l2";
    }
    return "?";
}

/// A closed family of distance metrics. Norms carry the dataset's
/// dimensionality; edit distance leaves it at 0.
struct Metric {
    MetricKind kind = MetricKind::L2Norm;
    std::uint32_t dimension = 0;

    static Metric edit() { return Metric{MetricKind::EditDistance, 0}; }
    static Metric l1(std::uint32_t dim) { return Metric{MetricKind::L1Norm, dim}; }
    static Metric l2(std::uint32_t dim) { return Metric{MetricKind::L2Norm, dim}; }

    bool is_norm() const { return kind != MetricKind::EditDistance; }

    /// Absolute tolerance for axiom checks and oracle comparisons.
    double tolerance() const { return kind == MetricKind::EditDistance ? 0.0 : 1e-9; }
};

/// Tally of distance evaluations. One counter per query and node role;
/// counters are merged explicitly at fan-in, never shared.
struct DistanceCounter {
    std::uint64_t count = 0;

    void merge(const DistanceCounter& other) { count += other.count; }
};

namespace detail {

inline std::uint64_t levenshtein(const std::u32string& a, const std::u32string& b) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;
    std::vector<std::uint64_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::uint64_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

}  // namespace detail

/// The one place distances are computed. Increments `counter` by exactly 1.
inline double distance(const Metric& metric, const MetricObject& a, const MetricObject& b,
                       DistanceCounter& counter) {
    ++counter.count;
    if (metric.kind == MetricKind::EditDistance) {
        if (!a.is_text() || !b.is_text())
            throw KindMismatchError("edit distance requires string payloads");
        return static_cast<double>(detail::levenshtein(a.text(), b.text()));
    }
    if (a.is_text() || b.is_text())
        throw KindMismatchError("norm metric requires vector payloads");
    const auto& va = a.vec();
    const auto& vb = b.vec();
    if (va.size() != vb.size())
        throw DimensionMismatchError("vector dimensionality mismatch: " + std::to_string(va.size()) +
                                     " vs " + std::to_string(vb.size()));
    if (metric.dimension != 0 && va.size() != metric.dimension)
        throw DimensionMismatchError("payload dimensionality " + std::to_string(va.size()) +
                                     " does not match metric dimensionality " +
                                     std::to_string(metric.dimension));
    if (metric.kind == MetricKind::L1Norm) {
        double s = 0.0;
        for (std::size_t i = 0; i < va.size(); ++i) s += std::abs(va[i] - vb[i]);
        return s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        double d = va[i] - vb[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// --- Metric-axiom validation ----------------------------------------------------

struct AxiomViolation {
    enum class Kind { Symmetry, Identity, NonNegativity, Triangle } kind;
    ObjectId a = 0, b = 0, c = 0;
    double lhs = 0.0, rhs = 0.0;
};

struct ValidationReport {
    std::uint64_t triples_checked = 0;
    std::uint64_t violation_count = 0;
    std::vector<AxiomViolation> samples;  // first few violations, for reporting

    bool ok() const { return violation_count == 0; }

    void record(AxiomViolation v) {
        ++violation_count;
        if (samples.size() < 16) samples.push_back(v);
    }
};

/// Checks the metric axioms on `triples` uniformly random triples from the
/// sample. Violations are data, not errors: they land in the report.
inline ValidationReport validate_distance(
    const std::function<double(const MetricObject&, const MetricObject&)>& dist,
    std::span<const MetricObject> sample, std::uint64_t triples, std::uint64_t seed,
    double tol) {
    ValidationReport report;
    if (sample.empty()) return report;
    std::mt19937_64 rng(mix_seed(seed));
    const std::size_t n = sample.size();
    for (std::uint64_t t = 0; t < triples; ++t) {
        const MetricObject& a = sample[rng() % n];
        const MetricObject& b = sample[rng() % n];
        const MetricObject& c = sample[rng() % n];
        double dab = dist(a, b);
        double dba = dist(b, a);
        double daa = dist(a, a);
        double dac = dist(a, c);
        double dbc = dist(b, c);
        ++report.triples_checked;
        if (std::abs(dab - dba) > tol)
            report.record({AxiomViolation::Kind::Symmetry, a.id, b.id, 0, dab, dba});
        if (std::abs(daa) > tol)
            report.record({AxiomViolation::Kind::Identity, a.id, 0, 0, daa, 0.0});
        if (dab < -tol)
            report.record({AxiomViolation::Kind::NonNegativity, a.id, b.id, 0, dab, 0.0});
        if (dac > dab + dbc + tol)
            report.record({AxiomViolation::Kind::Triangle, a.id, b.id, c.id, dac, dab + dbc});
    }
    return report;
}

inline ValidationReport validate_metric(const Metric& metric, std::span<const MetricObject> sample,
                                        std::uint64_t triples, std::uint64_t seed = 0) {
    DistanceCounter counter;
    auto dist = [&](const MetricObject& a, const MetricObject& b) {
        return distance(metric, a, b, counter);
    };
    return validate_distance(dist, sample, triples, seed, metric.tolerance());
}

// --- Object storage ---------------------------------------------------------------

/// Owning id -> object map. Trees hold centers by value and member ids only;
/// payload lookups go through a store.
class ObjectStore {
public:
    void add(MetricObject obj) {
        auto [it, inserted] = map_.emplace(obj.id, std::move(obj));
        if (!inserted) throw DuplicateIdError("object id " + std::to_string(it->first) + " already present");
    }

    const MetricObject& get(ObjectId id) const {
        auto it = map_.find(id);
        if (it == map_.end()) throw UnknownIdError("object id " + std::to_string(id) + " not found");
        return it->second;
    }

    bool contains(ObjectId id) const { return map_.count(id) != 0; }

    void erase(ObjectId id) {
        if (map_.erase(id) == 0) throw UnknownIdError("object id " + std::to_string(id) + " not found");
    }

    std::size_t size() const { return map_.size(); }
    bool empty() const { return map_.empty(); }

    /// Ids in ascending order; the deterministic iteration order for
    /// serialization and whole-store scans.
    std::vector<ObjectId> sorted_ids() const {
        std::vector<ObjectId> ids;
        ids.reserve(map_.size());
        for (const auto& [id, obj] : map_) ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        return ids;
    }

private:
    std::unordered_map<ObjectId, MetricObject> map_;
};

// --- Object serialization (shared by messages and the index file) -----------------

inline void write_object(ByteWriter& w, const MetricObject& obj) {
    w.u64(obj.id);
    if (obj.is_text()) {
        w.u8(0);
        const auto& t = obj.text();
        w.u64(t.size());
        for (char32_t cp : t) w.u32(static_cast<std::uint32_t>(cp));
    } else {
        w.u8(1);
        const auto& v = obj.vec();
        w.u64(v.size());
        for (double d : v) w.f64(d);
    }
}

inline MetricObject read_object(ByteReader& r) {
    MetricObject obj;
    obj.id = r.u64();
    std::uint8_t kind = r.u8();
    std::uint64_t n = r.u64();
    if (kind == 0) {
        std::u32string t;
        t.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) t.push_back(static_cast<char32_t>(r.u32()));
        obj.payload = std::move(t);
    } else if (kind == 1) {
        std::vector<double> v;
        v.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) v.push_back(r.f64());
        obj.payload = std::move(v);
    } else {
        throw CorruptIndexError("bad payload tag");
    }
    return obj;
}

}  // namespace dims

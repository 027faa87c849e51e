#include "elicit/formal_context.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <unordered_map>

#include "elicit/error.hpp"

namespace elicit {

FormalContext::FormalContext(std::vector<std::string> objects, std::vector<std::string> attributes,
                             std::vector<Bitset> rows)
    : objects_(std::move(objects)), attributes_(std::move(attributes)), rows_(std::move(rows)) {
    if (rows_.size() != objects_.size()) throw validation_error("formal context needs one row per object");
    for (const Bitset& r : rows_) {
        if (r.size() != attributes_.size()) throw validation_error("formal context row has the wrong width");
    }
    columns_.assign(attributes_.size(), Bitset(objects_.size()));
    for (std::size_t o = 0; o < rows_.size(); ++o) {
        for (auto a = rows_[o].find_first(); a != Bitset::npos; a = rows_[o].find_next(a)) columns_[a].set(o);
    }
}

Bitset FormalContext::up(const Bitset& object_set) const {
    Bitset result(attributes_.size());
    result.set();
    for (auto o = object_set.find_first(); o != Bitset::npos; o = object_set.find_next(o)) result &= rows_[o];
    return result;
}

Bitset FormalContext::down(const Bitset& attribute_set) const {
    Bitset result(objects_.size());
    result.set();
    for (auto a = attribute_set.find_first(); a != Bitset::npos; a = attribute_set.find_next(a)) result &= columns_[a];
    return result;
}

std::optional<std::size_t> FormalContext::object_index(std::string_view name) const {
    auto it = std::find(objects_.begin(), objects_.end(), name);
    if (it == objects_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - objects_.begin());
}

std::optional<std::size_t> FormalContext::attribute_index(std::string_view name) const {
    auto it = std::find(attributes_.begin(), attributes_.end(), name);
    if (it == attributes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - attributes_.begin());
}

std::vector<std::string> derive(const FormalContext& context, Side side, std::span<const std::string> names) {
    std::vector<std::string> out;
    if (side == Side::objects) {
        Bitset a = context.empty_objects();
        for (const auto& n : names) {
            auto i = context.object_index(n);
            if (!i) throw validation_error("unknown object '" + n + "'");
            a.set(*i);
        }
        const Bitset b = context.up(a);
        for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) out.push_back(context.attributes()[i]);
    } else {
        Bitset b = context.empty_attributes();
        for (const auto& n : names) {
            auto i = context.attribute_index(n);
            if (!i) throw validation_error("unknown attribute '" + n + "'");
            b.set(*i);
        }
        const Bitset a = context.down(b);
        for (auto i = a.find_first(); i != Bitset::npos; i = a.find_next(i)) out.push_back(context.objects()[i]);
    }
    return out;
}

bool lectic_less(const Bitset& a, const Bitset& b) {
    const Bitset diff = a ^ b;
    const auto first = diff.find_first();
    return first != Bitset::npos && b.test(first);
}

namespace {

std::vector<FormalConcept> next_closure(const FormalContext& ctx) {
    const std::size_t m = ctx.attribute_count();
    std::vector<FormalConcept> out;
    Bitset intent = ctx.close_attributes(ctx.empty_attributes());
    out.push_back({ctx.down(intent), intent});
    for (;;) {
        Bitset prefix = intent;
        bool advanced = false;
        for (std::size_t i = m; i-- > 0;) {
            if (prefix.test(i)) {
                prefix.reset(i);  // prefix now holds intent ∩ {0..i-1}
                continue;
            }
            Bitset candidate = prefix;
            candidate.set(i);
            const Bitset extent = ctx.down(candidate);
            Bitset closed = ctx.up(extent);
            // canonical iff closing added nothing before position i
            if ((closed - prefix).find_first() == i) {
                intent = std::move(closed);
                out.push_back({extent, intent});
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    return out;
}

// Close-by-one from (extent, intent), trying attributes from `start` on.
void close_by_one(const FormalContext& ctx, const Bitset& extent, const Bitset& intent, std::size_t start,
                  std::vector<FormalConcept>& out) {
    for (std::size_t j = start; j < ctx.attribute_count(); ++j) {
        if (intent.test(j)) continue;
        Bitset child_extent = extent & ctx.attribute_extent(j);
        Bitset child_intent = ctx.up(child_extent);
        bool canonical = true;
        for (std::size_t k = 0; k < j; ++k) {
            if (child_intent.test(k) != intent.test(k)) {
                canonical = false;
                break;
            }
        }
        if (!canonical) continue;
        out.push_back({child_extent, child_intent});
        close_by_one(ctx, child_extent, child_intent, j + 1, out);
    }
}

std::vector<FormalConcept> parallel_close_by_one(const FormalContext& ctx) {
    const std::size_t m = ctx.attribute_count();
    const Bitset root_intent = ctx.close_attributes(ctx.empty_attributes());
    const Bitset root_extent = ctx.down(root_intent);

    // Branch j holds every concept whose generating attribute at depth one is j.
    std::vector<std::vector<FormalConcept>> branches(m);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < m; j = next++) {
            if (root_intent.test(j)) continue;
            Bitset extent = root_extent & ctx.attribute_extent(j);
            Bitset intent = ctx.up(extent);
            bool canonical = true;
            for (std::size_t k = 0; k < j; ++k) {
                if (intent.test(k) != root_intent.test(k)) {
                    canonical = false;
                    break;
                }
            }
            if (!canonical) continue;
            branches[j].push_back({extent, intent});
            close_by_one(ctx, extent, intent, j + 1, branches[j]);
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(m, 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    std::vector<FormalConcept> out{{root_extent, root_intent}};
    for (auto& b : branches) std::move(b.begin(), b.end(), std::back_inserter(out));
    std::sort(out.begin(), out.end(),
              [](const FormalConcept& a, const FormalConcept& b) { return lectic_less(a.intent, b.intent); });
    return out;
}

}  // namespace

std::vector<FormalConcept> enumerate_concepts(const FormalContext& context, EnumerationMode mode) {
    return mode == EnumerationMode::sequential ? next_closure(context) : parallel_close_by_one(context);
}

void validate_band(const ProbabilityBand& band) {
    if (!(0.0 <= band.lower && band.lower <= band.upper && band.upper <= 1.0)) {
        throw validation_error("probability band must satisfy 0 <= lower <= upper <= 1");
    }
}

FormalContext build_band_context(const ScoreTable& scores, const ProbabilityBand& band, Approach approach) {
    validate_band(band);
    std::vector<std::string> objects;
    std::vector<Bitset> rows;
    for (const ScoreRow& row : scores.rows) {
        if (!band.contains(row.scores.get(approach))) continue;
        objects.push_back("c" + std::to_string(row.case_id));
        Bitset bits(scores.answer_ids.size());
        for (std::size_t a = 0; a < row.assignment.size(); ++a) {
            if (row.assignment[a]) bits.set(a);
        }
        rows.push_back(std::move(bits));
    }
    return FormalContext(std::move(objects), scores.answer_ids, std::move(rows));
}

std::vector<AttributeSupport> attribute_supports(const FormalContext& context) {
    std::vector<AttributeSupport> out;
    const std::size_t m = context.attribute_count();
    for (std::size_t a = 0; a < m; ++a) out.push_back({{a}, context.attribute_extent(a).count()});
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            const std::size_t n = (context.attribute_extent(a) & context.attribute_extent(b)).count();
            if (n > 0) out.push_back({{a, b}, n});
        }
    }
    return out;
}

}  // namespace elicit

#include "elicit/cxt.hpp"

#include "csv.hpp"
#include "elicit/error.hpp"

namespace elicit {

namespace {

void check_name(const std::string& name) {
    if (name.find_first_of("\r\n") != std::string::npos) {
        throw validation_error("CXT names cannot contain line breaks: '" + name + "'");
    }
}

}  // namespace

std::string context_to_cxt(const FormalContext& context) {
    std::string out = "B\n\n";
    out += std::to_string(context.object_count()) + "\n";
    out += std::to_string(context.attribute_count()) + "\n\n";
    for (const auto& o : context.objects()) {
        check_name(o);
        out += o + "\n";
    }
    for (const auto& a : context.attributes()) {
        check_name(a);
        out += a + "\n";
    }
    for (std::size_t o = 0; o < context.object_count(); ++o) {
        for (std::size_t a = 0; a < context.attribute_count(); ++a) out += context.incident(o, a) ? 'X' : '.';
        out += '\n';
    }
    return out;
}

FormalContext context_from_cxt(std::string_view text) {
    const auto lines = detail::split_lines(text);
    std::size_t at = 0;
    auto next = [&]() -> std::string_view {
        if (at >= lines.size()) throw validation_error("CXT file ends early");
        return lines[at++];
    };
    if (detail::trim(next()) != "B") throw validation_error("CXT file must start with 'B'");
    if (!detail::trim(next()).empty()) throw validation_error("CXT: expected a blank line after 'B'");
    const long long objects = detail::parse_integer(next());
    const long long attributes = detail::parse_integer(next());
    if (objects < 0 || attributes < 0) throw validation_error("CXT: negative dimensions");
    if (!detail::trim(next()).empty()) throw validation_error("CXT: expected a blank line after the dimensions");

    std::vector<std::string> object_names;
    std::vector<std::string> attribute_names;
    for (long long i = 0; i < objects; ++i) object_names.emplace_back(next());
    for (long long i = 0; i < attributes; ++i) attribute_names.emplace_back(next());

    std::vector<Bitset> rows;
    for (long long o = 0; o < objects; ++o) {
        const std::string_view row = detail::trim(next());
        if (row.size() != static_cast<std::size_t>(attributes)) {
            throw validation_error("CXT: row " + std::to_string(o + 1) + " has the wrong width");
        }
        Bitset bits(static_cast<std::size_t>(attributes));
        for (std::size_t a = 0; a < row.size(); ++a) {
            if (row[a] == 'X' || row[a] == 'x') bits.set(a);
            else if (row[a] != '.') throw validation_error("CXT: unexpected character in incidence row");
        }
        rows.push_back(std::move(bits));
    }
    return FormalContext(std::move(object_names), std::move(attribute_names), std::move(rows));
}

void export_cxt(const FormalContext& context, const std::filesystem::path& path) {
    detail::write_text_file(path, context_to_cxt(context));
}

FormalContext load_cxt(const std::filesystem::path& path) { return context_from_cxt(detail::read_text_file(path)); }

}  // namespace elicit

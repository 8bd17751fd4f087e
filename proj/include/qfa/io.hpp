#pragma once

// Automaton documents: one JSON object per automaton, format_version "1".
//
// Real numbers are decimal strings (shortest form that round-trips the
// double exactly); complex numbers are ["re", "im"]; matrices are row-major
// arrays of rows. Key order is fixed, so serialization is deterministic.
// Unknown keys are rejected at every level.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"
#include "qfa/models.hpp"

namespace qfa {

inline constexpr std::string_view format_version = "1";

struct Metadata {
    std::optional<std::string> name;
    std::optional<std::string> description;
    std::optional<std::uint64_t> seed;

    bool empty() const { return !name && !description && !seed; }
};

/// Parsed but not yet validated document payload; gpfa and pfa documents
/// share GpfaDescription and are told apart by `kind`.
using Description = std::variant<NqfaDescription, KwqfaDescription, QfcDescription, GpfaDescription>;

struct DescriptionDocument {
    std::string kind;
    Description description;
    Metadata metadata;
};

struct Document {
    Model model;
    Metadata metadata;
};

/// Shortest decimal string that parses back to exactly `x`.
inline std::string format_real(double x)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

/// Comma-separated symbol names; "" is the empty word.
inline Word parse_word(std::string_view text)
{
    Word w;
    if (text.empty())
        return w;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        w.emplace_back(text.substr(start, comma == std::string_view::npos ? text.size() - start : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return w;
}

inline std::string format_word(const Word& w)
{
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i)
        out += (i ? "," : "") + w[i];
    return out;
}

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson real_json(double x) { return format_real(x); }

inline ojson complex_json(complex z) { return ojson::array({format_real(z.real()), format_real(z.imag())}); }

inline ojson complex_matrix_json(const ComplexMatrix& m)
{
    ojson rows = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ojson real_matrix_json(const RealMatrix& m)
{
    ojson rows = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(real_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ojson real_vector_json(const RealVector& v)
{
    ojson out = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(real_json(v(i)));
    return out;
}

inline ojson header(const std::string& kind, const Metadata& meta)
{
    ojson doc;
    doc["format_version"] = std::string(format_version);
    doc["kind"] = kind;
    if (!meta.empty()) {
        ojson m = ojson::object();
        if (meta.name)
            m["name"] = *meta.name;
        if (meta.description)
            m["description"] = *meta.description;
        if (meta.seed)
            m["seed"] = std::to_string(*meta.seed);
        doc["metadata"] = std::move(m);
    }
    return doc;
}

template <typename Map, typename Fn>
ojson tape_object(const Alphabet& a, const Map& m, Fn fn)
{
    ojson out = ojson::object();
    for (std::size_t t : a.tape_order())
        out[a.tape_name(t)] = fn(m.at(a.tape_name(t)));
    return out;
}

inline ojson partition_json(const Partition& p)
{
    ojson out;
    out["non_halting"] = p.non_halting;
    out["accepting"] = p.accepting;
    out["rejecting"] = p.rejecting;
    return out;
}

inline ojson to_json(const NqfaDescription& d, const Metadata& meta, const std::string& kind = "nqfa")
{
    ojson doc = header(kind, meta);
    const Alphabet a(d.alphabet);
    doc["alphabet"] = d.alphabet;
    doc["states"] = d.states;
    doc["initial"] = d.initial;
    doc["partition"] = partition_json(d.partition);
    doc["unitaries"] = tape_object(a, d.unitaries, complex_matrix_json);
    if (kind == "nqfa")
        doc["measurements"] = tape_object(a, d.measurements, [](const std::vector<ComplexMatrix>& f) {
            ojson out = ojson::array();
            for (const auto& p : f)
                out.push_back(complex_matrix_json(p));
            return out;
        });
    return doc;
}

inline ojson to_json(const KwqfaDescription& d, const Metadata& meta)
{
    NqfaDescription n{d.alphabet, d.states, d.initial, d.partition, d.unitaries, {}};
    return to_json(n, meta, "kwqfa");
}

inline ojson to_json(const QfcDescription& d, const Metadata& meta)
{
    ojson doc = header("qfc", meta);
    const Alphabet a(d.alphabet);
    doc["alphabet"] = d.alphabet;
    doc["states"] = d.states;
    doc["initial"] = d.initial;
    doc["unitaries"] = tape_object(a, d.unitaries, complex_matrix_json);
    ojson obs = ojson::array();
    for (const auto& o : d.observable) {
        ojson entry;
        entry["label"] = o.label;
        entry["projector"] = complex_matrix_json(o.projector);
        obs.push_back(std::move(entry));
    }
    doc["observable"] = std::move(obs);
    ojson control;
    control["alphabet"] = d.control.alphabet;
    control["states"] = d.control.states;
    control["start"] = d.control.start;
    control["accepting"] = d.control.accepting;
    ojson transitions = ojson::object();
    for (const auto& q : d.control.states) {
        ojson row = ojson::object();
        for (const auto& c : d.control.alphabet)
            row[c] = d.control.transitions.at(q).at(c);
        transitions[q] = std::move(row);
    }
    control["transitions"] = std::move(transitions);
    doc["control"] = std::move(control);
    return doc;
}

inline ojson to_json(const GpfaDescription& d, const Metadata& meta, const std::string& kind)
{
    ojson doc = header(kind, meta);
    doc["alphabet"] = d.alphabet;
    doc["size"] = static_cast<std::uint64_t>(d.initial.size());
    doc["initial"] = real_vector_json(d.initial);
    ojson transitions = ojson::object();
    for (const auto& sym : d.alphabet)
        transitions[sym] = real_matrix_json(d.transitions.at(sym));
    doc["transitions"] = std::move(transitions);
    doc["final"] = real_vector_json(d.final);
    return doc;
}

// ---- parsing ----

class Reader {
public:
    static std::string join(const std::string& path, const std::string& key)
    {
        return path.empty() ? key : path + "." + key;
    }
    static std::string index(const std::string& path, std::size_t i)
    {
        return path + "[" + std::to_string(i) + "]";
    }

    static const ojson& field(const ojson& obj, const std::string& path, const std::string& key)
    {
        auto it = obj.find(key);
        if (it == obj.end())
            throw parse_error(join(path, key), "missing required key");
        return *it;
    }

    static void only_keys(const ojson& obj, const std::string& path, std::initializer_list<const char*> allowed)
    {
        if (!obj.is_object())
            throw parse_error(path, "expected an object");
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [key, value] : obj.items())
            if (!ok.count(key))
                throw parse_error(join(path, key), "unknown key '" + key + "'");
    }

    static std::string string(const ojson& j, const std::string& path)
    {
        if (!j.is_string())
            throw parse_error(path, "expected a string");
        return j.get<std::string>();
    }

    static std::vector<std::string> strings(const ojson& j, const std::string& path)
    {
        if (!j.is_array())
            throw parse_error(path, "expected an array of strings");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < j.size(); ++i)
            out.push_back(string(j[i], index(path, i)));
        return out;
    }

    static double real(const ojson& j, const std::string& path)
    {
        double x = 0.0;
        if (j.is_number()) {
            x = j.get<double>();
        } else if (j.is_string()) {
            const auto& s = j.get_ref<const std::string&>();
            const char* first = s.data();
            const char* last = s.data() + s.size();
            if (first != last && *first == '+')
                ++first;
            auto [ptr, ec] = std::from_chars(first, last, x);
            if (ec != std::errc() || ptr != last || s.empty())
                throw parse_error(path, "'" + s + "' is not a decimal number");
        } else {
            throw parse_error(path, "expected a decimal string");
        }
        if (!std::isfinite(x))
            throw parse_error(path, "number is not finite");
        return x;
    }

    static complex complex_number(const ojson& j, const std::string& path)
    {
        if (!j.is_array() || j.size() != 2)
            throw parse_error(path, "expected [re, im]");
        return {real(j[0], index(path, 0)), real(j[1], index(path, 1))};
    }

    template <typename Scalar, typename Entry>
    static Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix(const ojson& j, const std::string& path,
                                                                        Entry entry)
    {
        if (!j.is_array() || j.empty())
            throw parse_error(path, "expected a non-empty array of rows");
        const std::size_t rows = j.size();
        std::size_t cols = 0;
        for (std::size_t i = 0; i < rows; ++i) {
            if (!j[i].is_array() || j[i].empty())
                throw parse_error(index(path, i), "expected a non-empty row");
            if (i == 0)
                cols = j[i].size();
            else if (j[i].size() != cols)
                throw parse_error(index(path, i), "row length differs from row 0");
        }
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t k = 0; k < cols; ++k)
                m(i, k) = entry(j[i][k], index(index(path, i), k));
        return m;
    }

    static ComplexMatrix complex_matrix(const ojson& j, const std::string& path)
    {
        return matrix<complex>(j, path, complex_number);
    }

    static RealMatrix real_matrix(const ojson& j, const std::string& path)
    {
        return matrix<double>(j, path, real);
    }

    static RealVector real_vector(const ojson& j, const std::string& path)
    {
        if (!j.is_array())
            throw parse_error(path, "expected an array");
        RealVector v(static_cast<Eigen::Index>(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i)
            v(static_cast<Eigen::Index>(i)) = real(j[i], index(path, i));
        return v;
    }

    template <typename Fn>
    static auto keyed(const ojson& j, const std::string& path, Fn fn)
    {
        if (!j.is_object())
            throw parse_error(path, "expected an object keyed by symbol");
        std::map<std::string, decltype(fn(j, path))> out;
        for (const auto& [key, value] : j.items())
            out.emplace(key, fn(value, join(path, key)));
        return out;
    }
};

inline Metadata read_metadata(const ojson& j)
{
    Reader::only_keys(j, "metadata", {"name", "description", "seed"});
    Metadata m;
    if (j.contains("name"))
        m.name = Reader::string(j["name"], "metadata.name");
    if (j.contains("description"))
        m.description = Reader::string(j["description"], "metadata.description");
    if (j.contains("seed")) {
        const auto s = Reader::string(j["seed"], "metadata.seed");
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
            throw parse_error("metadata.seed", "expected an unsigned integer string");
        m.seed = v;
    }
    return m;
}

inline Partition read_partition(const ojson& j)
{
    Reader::only_keys(j, "partition", {"non_halting", "accepting", "rejecting"});
    return {Reader::strings(Reader::field(j, "partition", "non_halting"), "partition.non_halting"),
            Reader::strings(Reader::field(j, "partition", "accepting"), "partition.accepting"),
            Reader::strings(Reader::field(j, "partition", "rejecting"), "partition.rejecting")};
}

inline std::map<std::string, ComplexMatrix> read_unitaries(const ojson& doc)
{
    return Reader::keyed(Reader::field(doc, "", "unitaries"), "unitaries", Reader::complex_matrix);
}

inline Description read_payload(const std::string& kind, const ojson& doc)
{
    using R = Reader;
    if (kind == "nqfa" || kind == "kwqfa") {
        if (kind == "nqfa")
            R::only_keys(doc, "", {"format_version", "kind", "metadata", "alphabet", "states", "initial", "partition",
                                   "unitaries", "measurements"});
        else
            R::only_keys(doc, "", {"format_version", "kind", "metadata", "alphabet", "states", "initial", "partition",
                                   "unitaries"});
        KwqfaDescription k;
        k.alphabet = R::strings(R::field(doc, "", "alphabet"), "alphabet");
        k.states = R::strings(R::field(doc, "", "states"), "states");
        k.initial = R::string(R::field(doc, "", "initial"), "initial");
        k.partition = read_partition(R::field(doc, "", "partition"));
        k.unitaries = read_unitaries(doc);
        if (kind == "kwqfa")
            return k;
        NqfaDescription n{k.alphabet, k.states, k.initial, k.partition, k.unitaries, {}};
        n.measurements = R::keyed(R::field(doc, "", "measurements"), "measurements",
                                  [](const ojson& j, const std::string& path) {
                                      if (!j.is_array())
                                          throw parse_error(path, "expected an array of projectors");
                                      std::vector<ComplexMatrix> f;
                                      for (std::size_t i = 0; i < j.size(); ++i)
                                          f.push_back(R::complex_matrix(j[i], R::index(path, i)));
                                      return f;
                                  });
        return n;
    }
    if (kind == "qfc") {
        R::only_keys(doc, "", {"format_version", "kind", "metadata", "alphabet", "states", "initial", "unitaries",
                               "observable", "control"});
        QfcDescription q;
        q.alphabet = R::strings(R::field(doc, "", "alphabet"), "alphabet");
        q.states = R::strings(R::field(doc, "", "states"), "states");
        q.initial = R::string(R::field(doc, "", "initial"), "initial");
        q.unitaries = read_unitaries(doc);
        const auto& obs = R::field(doc, "", "observable");
        if (!obs.is_array())
            throw parse_error("observable", "expected an array of outcomes");
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const auto path = R::index("observable", i);
            R::only_keys(obs[i], path, {"label", "projector"});
            q.observable.push_back({R::string(R::field(obs[i], path, "label"), path + ".label"),
                                    R::complex_matrix(R::field(obs[i], path, "projector"), path + ".projector")});
        }
        const auto& c = R::field(doc, "", "control");
        R::only_keys(c, "control", {"alphabet", "states", "start", "accepting", "transitions"});
        q.control.alphabet = R::strings(R::field(c, "control", "alphabet"), "control.alphabet");
        q.control.states = R::strings(R::field(c, "control", "states"), "control.states");
        q.control.start = R::string(R::field(c, "control", "start"), "control.start");
        q.control.accepting = R::strings(R::field(c, "control", "accepting"), "control.accepting");
        q.control.transitions =
            R::keyed(R::field(c, "control", "transitions"), "control.transitions",
                     [](const ojson& row, const std::string& path) {
                         return R::keyed(row, path, R::string);
                     });
        return q;
    }
    if (kind == "gpfa" || kind == "pfa") {
        R::only_keys(doc, "", {"format_version", "kind", "metadata", "alphabet", "size", "initial", "transitions",
                               "final"});
        GpfaDescription g;
        g.alphabet = R::strings(R::field(doc, "", "alphabet"), "alphabet");
        const auto& size = R::field(doc, "", "size");
        if (!size.is_number_unsigned())
            throw parse_error("size", "expected a non-negative integer");
        g.initial = R::real_vector(R::field(doc, "", "initial"), "initial");
        if (size.get<std::uint64_t>() != static_cast<std::uint64_t>(g.initial.size()))
            throw parse_error("size", "state count differs from the length of 'initial'");
        g.transitions = R::keyed(R::field(doc, "", "transitions"), "transitions", R::real_matrix);
        g.final = R::real_vector(R::field(doc, "", "final"), "final");
        return g;
    }
    throw parse_error("kind", "unknown kind '" + kind + "'");
}

} // namespace detail

/// Document structure only; invariants are not checked.
inline DescriptionDocument parse_description(std::string_view text)
{
    detail::ojson doc;
    try {
        doc = detail::ojson::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error("", std::string("syntax error at byte ") + std::to_string(e.byte) + ": " + e.what(),
                          e.byte);
    }
    if (!doc.is_object())
        throw parse_error("", "document must be a JSON object");
    const auto version = detail::Reader::string(detail::Reader::field(doc, "", "format_version"), "format_version");
    if (version != format_version)
        throw parse_error("format_version", "unsupported format version '" + version + "'");
    const auto kind = detail::Reader::string(detail::Reader::field(doc, "", "kind"), "kind");
    DescriptionDocument out{kind, detail::read_payload(kind, doc), {}};
    if (doc.contains("metadata"))
        out.metadata = detail::read_metadata(doc["metadata"]);
    return out;
}

/// Every invariant violation of a parsed document.
inline std::vector<Violation> check(const DescriptionDocument& d)
{
    if (d.kind == "pfa")
        return check_pfa(std::get<GpfaDescription>(d.description));
    return std::visit([](const auto& x) { return check(x); }, d.description);
}

inline Model build(const DescriptionDocument& d)
{
    if (d.kind == "nqfa")
        return build_nqfa(std::get<NqfaDescription>(d.description));
    if (d.kind == "kwqfa")
        return build_kwqfa(std::get<KwqfaDescription>(d.description));
    if (d.kind == "qfc")
        return build_qfc(std::get<QfcDescription>(d.description));
    if (d.kind == "pfa")
        return build_pfa(std::get<GpfaDescription>(d.description));
    return build_gpfa(std::get<GpfaDescription>(d.description));
}

/// Parses and validates. Throws parse_error for structural problems and
/// validation_error (with document paths) for broken invariants.
inline Document parse_document(std::string_view text)
{
    auto d = parse_description(text);
    return {build(d), d.metadata};
}

inline Model parse(std::string_view text) { return parse_document(text).model; }

inline std::string serialize(const Model& m, const Metadata& meta = {})
{
    const detail::ojson doc = std::visit(
        [&](const auto& x) -> detail::ojson {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Gpfa>)
                return detail::to_json(x.description(), meta, "gpfa");
            else if constexpr (std::is_same_v<T, Pfa>)
                return detail::to_json(x.description(), meta, "pfa");
            else
                return detail::to_json(x.description(), meta);
        },
        m);
    return doc.dump(2) + "\n";
}

} // namespace qfa

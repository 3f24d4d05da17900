#include "mlsol/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <regex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mlsol/error.hpp"
#include "mlsol/random.hpp"

namespace mlsol {

MultiLabelDataset::MultiLabelDataset(Matrix<double> features, Matrix<LabelBit> labels,
                                     std::vector<std::string> feature_names, std::vector<std::string> label_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      label_names_(std::move(label_names)) {
    if (features_.rows() == 0) throw Error("empty dataset");
    if (features_.rows() != labels_.rows()) {
        throw Error("feature and label matrices differ in row count (" + std::to_string(features_.rows()) +
                    " vs " + std::to_string(labels_.rows()) + ")");
    }
    if (feature_names_.size() != features_.cols()) throw Error("feature name count does not match feature columns");
    if (label_names_.size() != labels_.cols()) throw Error("label name count does not match label columns");
    for (double v : features_.data()) {
        if (!std::isfinite(v)) throw Error("non-finite feature value");
    }
    for (LabelBit v : labels_.data()) {
        if (v > 1) throw Error("label value outside {0,1}");
    }
}

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of_instance.size(); ++i) {
        if (fold_of_instance[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of_instance.size(); ++i) {
        if (fold_of_instance[i] != fold) out.push_back(i);
    }
    return out;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
        std::string out;
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            if (s[i] == '\\' && i + 2 < s.size()) ++i;
            out += s[i];
        }
        return out;
    }
    return s;
}

// Splits on `sep` outside single or double quotes. Quotes are kept; callers unquote.
std::vector<std::string> split_fields(std::string_view line, char sep) {
    std::vector<std::string> fields;
    std::string cur;
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote) {
            cur += c;
            if (c == '\\' && i + 1 < line.size()) {
                cur += line[++i];
            } else if (c == quote) {
                quote = 0;
            }
        } else if (c == '\'' || c == '"') {
            quote = c;
            cur += c;
        } else if (c == sep) {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

std::optional<double> parse_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// CSV uses doubled quotes rather than backslash escapes.
std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "", "cannot open file");
    return in;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

CsvTable read_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        auto fields = split_csv(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw ParseError(path.string(), line_no, "",
                             "ragged row: expected " + std::to_string(table.header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_no);
    }
    if (!have_header) throw ParseError(path.string(), 0, "", "missing header row");
    return table;
}

// ---- ARFF ----

struct ArffAttribute {
    std::string name;
    bool numeric = false;
    bool nominal = false;
    std::vector<std::string> values;  // nominal declarations
};

ArffAttribute parse_attribute(const std::string& rest, const std::string& file, std::size_t line_no) {
    // rest is everything after "@attribute"
    std::string s = trim(rest);
    ArffAttribute attr;
    std::size_t pos = 0;
    if (!s.empty() && (s[0] == '\'' || s[0] == '"')) {
        const char q = s[0];
        std::size_t end = 1;
        while (end < s.size() && s[end] != q) {
            if (s[end] == '\\') ++end;
            ++end;
        }
        if (end >= s.size()) throw ParseError(file, line_no, "", "unterminated attribute name");
        attr.name = unquote(s.substr(0, end + 1));
        pos = end + 1;
    } else {
        const auto end = s.find_first_of(" \t{");
        if (end == std::string::npos) throw ParseError(file, line_no, s, "attribute without type");
        attr.name = s.substr(0, end);
        pos = end;
    }
    const std::string type = trim(s.substr(pos));
    if (type.empty()) throw ParseError(file, line_no, attr.name, "attribute without type");
    if (type.front() == '{') {
        const auto close = type.rfind('}');
        if (close == std::string::npos) throw ParseError(file, line_no, attr.name, "unterminated nominal list");
        attr.nominal = true;
        for (auto& v : split_fields(std::string_view(type).substr(1, close - 1), ',')) {
            attr.values.push_back(unquote(v));
        }
        return attr;
    }
    const std::string t = lower(type);
    if (t == "numeric" || t == "real" || t == "integer") {
        attr.numeric = true;
    }
    // string/date/relational attributes stay neither numeric nor nominal
    return attr;
}

std::string decode_xml_entities(std::string s) {
    static const std::pair<const char*, const char*> entities[] = {
        {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&apos;", "'"}, {"&amp;", "&"}};
    for (const auto& [from, to] : entities) {
        std::string::size_type p = 0;
        const std::string f = from;
        while ((p = s.find(f, p)) != std::string::npos) {
            s.replace(p, f.size(), to);
            p += std::char_traits<char>::length(to);
        }
    }
    return s;
}

std::string encode_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::vector<std::string> read_label_xml(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    static const std::regex label_re(R"re(<label\s+name\s*=\s*(?:"([^"]*)"|'([^']*)'))re");
    std::vector<std::string> names;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), label_re); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        names.push_back(decode_xml_entities(m[1].matched ? m[1].str() : m[2].str()));
    }
    if (names.empty()) throw ParseError(path.string(), 0, "", "no <label name=...> entries found");
    return names;
}

std::string arff_name(const std::string& name) {
    if (name.find_first_of(" \t,{}'\"%") == std::string::npos && !name.empty()) return name;
    std::string out = "'";
    for (char c : name) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    return out + "'";
}

}  // namespace

MultiLabelDataset load_mulan(const std::filesystem::path& arff_path, const std::filesystem::path& xml_path) {
    const std::string file = arff_path.string();
    const auto label_names = read_label_xml(xml_path);
    auto in = open_input(arff_path);

    std::vector<ArffAttribute> attributes;
    std::unordered_map<std::string, std::size_t> attr_index;
    std::string line;
    std::size_t line_no = 0;
    bool in_data = false;

    std::vector<std::size_t> label_attr;   // attribute index per label
    std::vector<std::size_t> feature_attr; // attribute index per feature
    std::vector<int> role;                 // per attribute: -1 feature, else label position
    std::vector<double> features;
    std::vector<LabelBit> labels;
    std::size_t rows = 0;

    auto setup_columns = [&] {
        role.assign(attributes.size(), -1);
        for (std::size_t l = 0; l < label_names.size(); ++l) {
            const auto it = attr_index.find(label_names[l]);
            if (it == attr_index.end()) {
                throw ParseError(file, line_no, label_names[l], "label listed in XML is absent from the ARFF header");
            }
            const auto& attr = attributes[it->second];
            if (attr.nominal) {
                for (const auto& v : attr.values) {
                    if (v != "0" && v != "1") {
                        throw ParseError(file, line_no, attr.name, "label attribute declares non-binary value '" + v + "'");
                    }
                }
            } else if (!attr.numeric) {
                throw ParseError(file, line_no, attr.name, "label attribute must be nominal {0,1} or numeric");
            }
            label_attr.push_back(it->second);
            role[it->second] = static_cast<int>(l);
        }
        for (std::size_t a = 0; a < attributes.size(); ++a) {
            if (role[a] >= 0) continue;
            if (!attributes[a].numeric && !attributes[a].nominal) {
                throw ParseError(file, line_no, attributes[a].name, "non-numeric feature attribute");
            }
            feature_attr.push_back(a);
        }
    };

    // value_of(attribute, raw) for one cell
    auto store_cell = [&](std::size_t a, const std::string& raw, std::vector<double>& frow,
                          std::vector<LabelBit>& lrow, const std::vector<std::size_t>& feature_pos) {
        const auto& attr = attributes[a];
        const std::string v = unquote(raw);
        if (v == "?") throw ParseError(file, line_no, attr.name, "missing value");
        if (role[a] >= 0) {
            const auto parsed = parse_real(v);
            if (!parsed || (*parsed != 0.0 && *parsed != 1.0)) {
                throw ParseError(file, line_no, attr.name, "non-binary label value '" + v + "'");
            }
            lrow[static_cast<std::size_t>(role[a])] = static_cast<LabelBit>(*parsed);
            return;
        }
        double value = 0.0;
        if (attr.nominal) {
            const auto it = std::find(attr.values.begin(), attr.values.end(), v);
            if (it == attr.values.end()) throw ParseError(file, line_no, attr.name, "undeclared nominal value '" + v + "'");
            value = static_cast<double>(it - attr.values.begin());
        } else {
            const auto parsed = parse_real(v);
            if (!parsed) throw ParseError(file, line_no, attr.name, "non-numeric feature value '" + v + "'");
            if (!std::isfinite(*parsed)) throw ParseError(file, line_no, attr.name, "non-finite feature value");
            value = *parsed;
        }
        frow[feature_pos[a]] = value;
    };

    std::vector<std::size_t> feature_pos;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        if (!in_data) {
            if (t[0] != '@') throw ParseError(file, line_no, "", "unexpected line in header");
            const auto sp = t.find_first_of(" \t");
            const std::string keyword = lower(t.substr(0, sp));
            if (keyword == "@relation") continue;
            if (keyword == "@attribute") {
                if (sp == std::string::npos) throw ParseError(file, line_no, "", "empty attribute declaration");
                auto attr = parse_attribute(t.substr(sp), file, line_no);
                if (!attr_index.emplace(attr.name, attributes.size()).second) {
                    throw ParseError(file, line_no, attr.name, "duplicate attribute");
                }
                attributes.push_back(std::move(attr));
            } else if (keyword == "@data") {
                in_data = true;
                setup_columns();
                feature_pos.assign(attributes.size(), 0);
                for (std::size_t f = 0; f < feature_attr.size(); ++f) feature_pos[feature_attr[f]] = f;
            } else {
                throw ParseError(file, line_no, "", "unknown header keyword '" + keyword + "'");
            }
            continue;
        }

        std::vector<double> frow(feature_attr.size(), 0.0);
        std::vector<LabelBit> lrow(label_attr.size(), 0);
        if (t[0] == '{') {
            const auto close = t.rfind('}');
            if (close == std::string::npos) throw ParseError(file, line_no, "", "unterminated sparse row");
            std::vector<bool> seen(attributes.size(), false);
            const std::string body = trim(std::string_view(t).substr(1, close - 1));
            if (!body.empty()) {
                for (const auto& entry : split_fields(body, ',')) {
                    const auto sp2 = entry.find_first_of(" \t");
                    if (sp2 == std::string::npos) throw ParseError(file, line_no, "", "malformed sparse entry '" + entry + "'");
                    std::size_t a = 0;
                    const auto idx = entry.substr(0, sp2);
                    const auto [p, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), a);
                    if (ec != std::errc() || p != idx.data() + idx.size() || a >= attributes.size()) {
                        throw ParseError(file, line_no, "", "bad sparse attribute index '" + idx + "'");
                    }
                    store_cell(a, trim(entry.substr(sp2)), frow, lrow, feature_pos);
                    seen[a] = true;
                }
            }
            // omitted sparse entries take the zero value (first declared value for nominals)
            for (std::size_t a = 0; a < attributes.size(); ++a) {
                if (seen[a]) continue;
                const auto& attr = attributes[a];
                store_cell(a, attr.nominal && !attr.values.empty() ? attr.values.front() : "0", frow, lrow, feature_pos);
            }
        } else {
            const auto fields = split_fields(t, ',');
            if (fields.size() != attributes.size()) {
                throw ParseError(file, line_no, "",
                                 "expected " + std::to_string(attributes.size()) + " values, got " +
                                     std::to_string(fields.size()));
            }
            for (std::size_t a = 0; a < attributes.size(); ++a) store_cell(a, fields[a], frow, lrow, feature_pos);
        }
        features.insert(features.end(), frow.begin(), frow.end());
        labels.insert(labels.end(), lrow.begin(), lrow.end());
        ++rows;
    }
    if (!in_data) throw ParseError(file, line_no, "", "missing @data section");
    if (rows == 0) throw ParseError(file, line_no, "", "empty dataset");

    std::vector<std::string> fnames;
    for (auto a : feature_attr) fnames.push_back(attributes[a].name);
    return MultiLabelDataset(Matrix<double>(rows, feature_attr.size(), std::move(features)),
                             Matrix<LabelBit>(rows, label_attr.size(), std::move(labels)), std::move(fnames),
                             label_names);
}

MultiLabelDataset load_csv(const std::filesystem::path& features_path, const std::filesystem::path& labels_path) {
    const auto ft = read_csv(features_path);
    const auto lt = read_csv(labels_path);
    if (ft.rows.size() != lt.rows.size()) {
        throw ParseError(labels_path.string(), 0, "",
                         "row count " + std::to_string(lt.rows.size()) + " does not match feature row count " +
                             std::to_string(ft.rows.size()));
    }
    if (ft.rows.empty()) throw ParseError(features_path.string(), 0, "", "empty dataset");

    const std::size_t n = ft.rows.size();
    Matrix<double> x(n, ft.header.size());
    Matrix<LabelBit> y(n, lt.header.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < ft.header.size(); ++c) {
            const auto v = parse_real(trim(ft.rows[i][c]));
            if (!v) throw ParseError(features_path.string(), ft.line_numbers[i], ft.header[c], "non-numeric feature value '" + ft.rows[i][c] + "'");
            if (!std::isfinite(*v)) throw ParseError(features_path.string(), ft.line_numbers[i], ft.header[c], "non-finite feature value");
            x(i, c) = *v;
        }
        for (std::size_t c = 0; c < lt.header.size(); ++c) {
            const auto v = parse_real(trim(lt.rows[i][c]));
            if (!v || (*v != 0.0 && *v != 1.0)) {
                throw ParseError(labels_path.string(), lt.line_numbers[i], lt.header[c], "non-binary label value '" + lt.rows[i][c] + "'");
            }
            y(i, c) = static_cast<LabelBit>(*v);
        }
    }
    return MultiLabelDataset(std::move(x), std::move(y), ft.header, lt.header);
}

void write_csv(const MultiLabelDataset& dataset, const std::filesystem::path& features_path,
               const std::filesystem::path& labels_path) {
    std::ofstream fx(features_path);
    std::ofstream fy(labels_path);
    if (!fx) throw Error("cannot write " + features_path.string());
    if (!fy) throw Error("cannot write " + labels_path.string());
    auto write_header = [](std::ofstream& out, const std::vector<std::string>& names) {
        for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << csv_field(names[c]);
        out << '\n';
    };
    write_header(fx, dataset.feature_names());
    write_header(fy, dataset.label_names());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto xr = dataset.x(i);
        for (std::size_t c = 0; c < xr.size(); ++c) fx << (c ? "," : "") << format_real(xr[c]);
        fx << '\n';
        const auto yr = dataset.y(i);
        for (std::size_t c = 0; c < yr.size(); ++c) fy << (c ? "," : "") << static_cast<int>(yr[c]);
        fy << '\n';
    }
    if (!fx || !fy) throw Error("write failed");
}

void write_mulan(const MultiLabelDataset& dataset, const std::filesystem::path& arff_path,
                 const std::filesystem::path& xml_path, const std::string& relation) {
    std::ofstream out(arff_path);
    if (!out) throw Error("cannot write " + arff_path.string());
    out << "@relation " << arff_name(relation) << "\n\n";
    for (const auto& name : dataset.feature_names()) out << "@attribute " << arff_name(name) << " numeric\n";
    for (const auto& name : dataset.label_names()) out << "@attribute " << arff_name(name) << " {0,1}\n";
    out << "\n@data\n";
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        bool first = true;
        for (double v : dataset.x(i)) {
            out << (first ? "" : ",") << format_real(v);
            first = false;
        }
        for (LabelBit v : dataset.y(i)) {
            out << (first ? "" : ",") << static_cast<int>(v);
            first = false;
        }
        out << '\n';
    }
    std::ofstream xml(xml_path);
    if (!xml) throw Error("cannot write " + xml_path.string());
    xml << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<labels xmlns=\"http://mulan.sourceforge.net/labels\">\n";
    for (const auto& name : dataset.label_names()) xml << "<label name=\"" << encode_xml(name) << "\"></label>\n";
    xml << "</labels>\n";
    if (!out || !xml) throw Error("write failed");
}

std::size_t minority_count(const MultiLabelDataset& dataset, std::size_t j) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) ones += dataset.labels()(i, j);
    return std::min(ones, dataset.size() - ones);
}

LabelBit minority_class(const MultiLabelDataset& dataset, std::size_t j) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) ones += dataset.labels()(i, j);
    return ones <= dataset.size() - ones ? 1 : 0;
}

std::vector<LabelBit> minority_classes(const MultiLabelDataset& dataset) {
    std::vector<LabelBit> out(dataset.num_labels());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = minority_class(dataset, j);
    return out;
}

MultiLabelDataset filter_rare_labels(const MultiLabelDataset& dataset) {
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < dataset.num_labels(); ++j) {
        if (minority_count(dataset, j) > 1) keep.push_back(j);
    }
    if (keep.empty()) throw Error("no usable labels");
    Matrix<LabelBit> y(dataset.size(), keep.size());
    std::vector<std::string> names;
    for (std::size_t c = 0; c < keep.size(); ++c) {
        names.push_back(dataset.label_names()[keep[c]]);
        for (std::size_t i = 0; i < dataset.size(); ++i) y(i, c) = dataset.labels()(i, keep[c]);
    }
    return MultiLabelDataset(dataset.features(), std::move(y), dataset.feature_names(), std::move(names));
}

std::vector<FoldAssignment> stratified_folds(const MultiLabelDataset& dataset, std::size_t folds,
                                             std::size_t repeats, std::uint64_t seed) {
    const std::size_t n = dataset.size();
    const std::size_t q = dataset.num_labels();
    if (folds < 2) throw Error("folds must be at least 2");
    if (folds > n) throw Error("folds (" + std::to_string(folds) + ") exceed instance count (" + std::to_string(n) + ")");
    constexpr std::size_t unassigned = std::numeric_limits<std::size_t>::max();

    std::vector<FoldAssignment> out;
    for (std::size_t r = 0; r < repeats; ++r) {
        RandomStream rng(derive_seed(seed, r));
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

        std::vector<double> slots(folds, static_cast<double>(n) / static_cast<double>(folds));
        Matrix<double> desire(folds, q);
        std::vector<std::size_t> remaining(q, 0);
        for (std::size_t j = 0; j < q; ++j) {
            for (std::size_t i = 0; i < n; ++i) remaining[j] += dataset.labels()(i, j);
            for (std::size_t f = 0; f < folds; ++f) desire(f, j) = static_cast<double>(remaining[j]) / static_cast<double>(folds);
        }

        std::vector<std::size_t> fold_of(n, unassigned);
        auto assign = [&](std::size_t i, std::size_t f) {
            fold_of[i] = f;
            slots[f] -= 1.0;
            for (std::size_t j = 0; j < q; ++j) {
                if (dataset.labels()(i, j)) {
                    desire(f, j) -= 1.0;
                    --remaining[j];
                }
            }
        };
        // best folds by primary key, then slots, then random
        auto pick = [&](auto primary) {
            std::vector<std::size_t> best;
            for (std::size_t f = 0; f < folds; ++f) {
                if (best.empty()) {
                    best.push_back(f);
                    continue;
                }
                const auto b = best.front();
                const double pf = primary(f), pb = primary(b);
                if (pf > pb || (pf == pb && slots[f] > slots[b])) {
                    best.assign(1, f);
                } else if (pf == pb && slots[f] == slots[b]) {
                    best.push_back(f);
                }
            }
            return best.size() == 1 ? best.front() : best[rng.index(best.size())];
        };

        while (true) {
            std::size_t label = q;
            for (std::size_t j = 0; j < q; ++j) {
                if (remaining[j] > 0 && (label == q || remaining[j] < remaining[label])) label = j;
            }
            if (label == q) break;
            for (std::size_t i : order) {
                if (fold_of[i] != unassigned || !dataset.labels()(i, label)) continue;
                assign(i, pick([&](std::size_t f) { return desire(f, label); }));
            }
        }
        for (std::size_t i : order) {
            if (fold_of[i] == unassigned) assign(i, pick([&](std::size_t f) { return slots[f]; }));
        }

        // Repair: a fold can come out empty only in degenerate tiny cases; steal from the largest.
        std::vector<std::size_t> sizes(folds, 0);
        for (auto f : fold_of) ++sizes[f];
        for (std::size_t f = 0; f < folds; ++f) {
            if (sizes[f] > 0) continue;
            const auto donor = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                if (fold_of[*it] == donor) {
                    fold_of[*it] = f;
                    --sizes[donor];
                    ++sizes[f];
                    break;
                }
            }
        }
        out.push_back(FoldAssignment{std::move(fold_of), r, folds});
    }
    return out;
}

DatasetStats dataset_stats(const MultiLabelDataset& dataset) {
    DatasetStats stats;
    const double n = static_cast<double>(dataset.size());
    double total = 0.0;
    for (LabelBit v : dataset.labels().data()) total += v;
    stats.cardinality = total / n;
    for (std::size_t j = 0; j < dataset.num_labels(); ++j) {
        const auto minority = static_cast<double>(minority_count(dataset, j));
        const double majority = n - minority;
        stats.per_label_imr.push_back(minority > 0 ? majority / minority : std::numeric_limits<double>::infinity());
    }
    double sum = 0.0;
    for (double r : stats.per_label_imr) sum += r;
    stats.mean_imbalance_ratio = stats.per_label_imr.empty() ? 0.0 : sum / static_cast<double>(stats.per_label_imr.size());
    return stats;
}

MultiLabelDataset select_rows(const MultiLabelDataset& dataset, std::span<const std::size_t> rows) {
    Matrix<double> x(0, dataset.num_features());
    Matrix<LabelBit> y(0, dataset.num_labels());
    for (auto r : rows) {
        if (r >= dataset.size()) throw Error("row index out of range");
        x.push_row(dataset.x(r));
        y.push_row(dataset.y(r));
    }
    return MultiLabelDataset(std::move(x), std::move(y), dataset.feature_names(), dataset.label_names());
}

MinMaxScaler MinMaxScaler::fit(const MultiLabelDataset& dataset) {
    MinMaxScaler s;
    const std::size_t d = dataset.num_features();
    s.min_.assign(d, std::numeric_limits<double>::infinity());
    std::vector<double> max(d, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto x = dataset.x(i);
        for (std::size_t c = 0; c < d; ++c) {
            s.min_[c] = std::min(s.min_[c], x[c]);
            max[c] = std::max(max[c], x[c]);
        }
    }
    s.range_.resize(d);
    for (std::size_t c = 0; c < d; ++c) s.range_[c] = max[c] - s.min_[c];
    return s;
}

void MinMaxScaler::transform_in_place(std::span<double> x) const {
    if (x.size() != min_.size()) throw Error("scaler dimension mismatch");
    for (std::size_t c = 0; c < x.size(); ++c) {
        // constant columns map to 0
        x[c] = range_[c] > 0 ? (x[c] - min_[c]) / range_[c] : 0.0;
    }
}

MultiLabelDataset MinMaxScaler::transform(const MultiLabelDataset& dataset) const {
    Matrix<double> x = dataset.features();
    for (std::size_t i = 0; i < x.rows(); ++i) transform_in_place(x.row(i));
    return MultiLabelDataset(std::move(x), dataset.labels(), dataset.feature_names(), dataset.label_names());
}

}  // namespace mlsol

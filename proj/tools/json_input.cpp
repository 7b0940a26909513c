#include "json_input.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include "exactlift/error.hpp"
#include "exactlift/examples.hpp"

namespace cli {

using namespace xl;

namespace {

// Counts the characters the lexer has consumed, so SAX callbacks can read the
// current offset.
struct CountingIterator {
    using iterator_category = std::input_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    const char* p;
    size_t* consumed;
    reference operator*() const { return *p; }
    CountingIterator& operator++() {
        ++p;
        ++*consumed;
        return *this;
    }
    CountingIterator operator++(int) {
        auto old = *this;
        ++*this;
        return old;
    }
    bool operator==(const CountingIterator& o) const { return p == o.p; }
    bool operator!=(const CountingIterator& o) const { return p != o.p; }
};

std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

class PositionRecorder : public nlohmann::json_sax<json> {
public:
    PositionRecorder(const std::string& text, const size_t* consumed, std::map<std::string, size_t>& out)
        : text_(text), consumed_(consumed), out_(out) {}

    bool null() override { return scalar(); }
    bool boolean(bool) override { return scalar(); }
    bool number_integer(number_integer_t) override { return scalar(); }
    bool number_unsigned(number_unsigned_t) override { return scalar(); }
    bool number_float(number_float_t, const string_t&) override { return scalar(); }
    bool string(string_t&) override { return scalar(); }
    bool binary(binary_t&) override { return scalar(); }
    bool start_object(std::size_t) override {
        begin();
        last_ = *consumed_;
        frames_.push_back({false, 0, current_});
        return true;
    }
    bool key(string_t& k) override {
        Frame& f = frames_.back();
        std::string p = f.pointer + "/" + escape(k);
        out_[p] = token_start();
        pending_ = p;
        last_ = *consumed_;
        return true;
    }
    bool end_object() override { return close(); }
    bool start_array(std::size_t) override {
        begin();
        last_ = *consumed_;
        frames_.push_back({true, 0, current_});
        return true;
    }
    bool end_array() override { return close(); }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

private:
    struct Frame {
        bool array;
        size_t index;
        std::string pointer;
    };
    const std::string& text_;
    const size_t* consumed_;
    size_t last_ = 0;  // where the previous event left the lexer
    std::map<std::string, size_t>& out_;
    std::vector<Frame> frames_;
    std::string current_, pending_;

    void begin() {
        if (frames_.empty()) {
            current_ = "";
            out_[current_] = token_start();
        } else if (frames_.back().array) {
            current_ = frames_.back().pointer + "/" + std::to_string(frames_.back().index);
            out_[current_] = token_start();
        } else {
            current_ = pending_;  // position already taken at the key
        }
    }
    // The lexer reports events once a token is complete (numbers one character
    // late), so walk forward from the previous event to the current token.
    size_t token_start() const {
        size_t i = last_;
        while (i < text_.size() && std::string_view(" \t\r\n,:]}").find(text_[i]) != std::string_view::npos) ++i;
        return i;
    }
    void end() {
        last_ = *consumed_;
        if (!frames_.empty() && frames_.back().array) frames_.back().index++;
    }
    bool scalar() {
        begin();
        end();
        return true;
    }
    bool close() {
        frames_.pop_back();
        end();
        return true;
    }
};

Position offset_to_position(const std::string& text, size_t offset) {
    Position p;
    for (size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++p.line;
            p.column = 1;
        } else {
            ++p.column;
        }
    }
    return p;
}

}  // namespace

std::shared_ptr<Document> Document::parse(std::string text, std::string source) {
    auto doc = std::make_shared<Document>();
    doc->source_ = std::move(source);
    try {
        doc->root_ = json::parse(text);
    } catch (const json::parse_error& e) {
        size_t at = e.byte ? e.byte - 1 : 0;
        Position p = offset_to_position(text, at);
        std::string msg = e.what();
        // drop the library's own "[json.exception.parse_error.101] parse error at line x, column y: " prefix
        if (auto colon = msg.find(": "); colon != std::string::npos) msg = msg.substr(colon + 2);
        throw ParseError(doc->source_ + ": " + msg, p.line, p.column);
    }
    size_t consumed = 0;
    std::map<std::string, size_t> offsets;
    PositionRecorder rec(text, &consumed, offsets);
    CountingIterator first{text.data(), &consumed}, last{text.data() + text.size(), &consumed};
    json::sax_parse(first, last, &rec);
    for (const auto& [ptr, off] : offsets) doc->positions_[ptr] = offset_to_position(text, off);
    return doc;
}

std::shared_ptr<Document> Document::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

Position Document::position(const std::string& pointer) const {
    std::string p = pointer;
    while (true) {
        if (auto it = positions_.find(p); it != positions_.end()) return it->second;
        if (p.empty()) return {};
        p = p.substr(0, p.rfind('/'));
    }
}

void Node::fail(const std::string& message) const {
    // a plain command-line value such as "column": no position worth reporting
    if (ptr_.empty() && !v_->is_structured() && doc_->source().rfind("--", 0) == 0)
        throw Error(ErrorCode::InvalidArgument, doc_->source() + ": " + message);
    Position p = doc_->position(ptr_);
    std::string where = ptr_.empty() ? "document root" : ptr_;
    throw ParseError(doc_->source() + ": " + where + ": " + message, p.line, p.column);
}

Node Node::at(const std::string& key) const {
    if (!v_->is_object()) fail("expected an object");
    auto it = v_->find(key);
    if (it == v_->end()) fail("missing member '" + key + "'");
    return Node(doc_, &*it, ptr_ + "/" + escape(key));
}

std::optional<Node> Node::find(const std::string& key) const {
    if (!v_->is_object()) fail("expected an object");
    auto it = v_->find(key);
    if (it == v_->end()) return std::nullopt;
    return Node(doc_, &*it, ptr_ + "/" + escape(key));
}

Node Node::operator[](size_t i) const {
    if (!v_->is_array()) fail("expected an array");
    if (i >= v_->size()) fail("index " + std::to_string(i) + " out of range");
    return Node(doc_, &(*v_)[i], ptr_ + "/" + std::to_string(i));
}

size_t Node::size() const {
    if (!v_->is_array()) fail("expected an array");
    return v_->size();
}

std::vector<std::string> Node::keys() const {
    if (!v_->is_object()) fail("expected an object");
    std::vector<std::string> out;
    for (auto it = v_->begin(); it != v_->end(); ++it) out.push_back(it.key());
    return out;
}

std::string Node::str() const {
    if (!v_->is_string()) fail("expected a string");
    return v_->get<std::string>();
}

long Node::integer() const {
    if (!v_->is_number_integer()) fail("expected an integer");
    return v_->get<long>();
}

bool Node::boolean() const {
    if (!v_->is_boolean()) fail("expected true or false");
    return v_->get<bool>();
}

// ---------------------------------------------------------------- quivers and fields

Quiver quiver_argument(const std::string& text) {
    if (auto q = Quiver::named(text)) return *q;
    if (text.find('{') == std::string::npos && text.size() > 5 && text.substr(text.size() - 5) == ".json")
        return load_quiver(Node::root(Document::load(text)));
    throw Error(ErrorCode::InvalidArgument,
                "unknown quiver '" + text + "' (named: kronecker<n>, loops<n>, threeloop, jordan, a<n>; or a .json file)");
}

Quiver load_quiver(const Node& n) {
    if (n.is_string()) {
        auto q = Quiver::named(n.str());
        if (!q) n.fail("unknown quiver name '" + n.str() + "'");
        return *q;
    }
    Node vs = n.at("vertices"), as = n.at("arrows");
    std::vector<std::string> vertices;
    for (size_t i = 0; i < vs.size(); ++i) vertices.push_back(vs[i].str());
    if (vertices.empty()) vs.fail("a quiver needs at least one vertex");
    Quiver shape(vertices, {});
    std::vector<Arrow> arrows;
    for (size_t i = 0; i < as.size(); ++i) {
        Node a = as[i];
        std::string id = a.at("id").str();
        Node t = a.at("tail"), h = a.at("head");
        int ti = at_node(t, [&] { return shape.vertex_index(t.str()); });
        int hi = at_node(h, [&] { return shape.vertex_index(h.str()); });
        for (const auto& prev : arrows)
            if (prev.id == id) a.at("id").fail("duplicate arrow id '" + id + "'");
        arrows.push_back({id, ti, hi});
    }
    return at_node(n, [&] { return Quiver(vertices, arrows); });
}

Field load_field(const Node& n) {
    std::string s = n.str();
    return at_node(n, [&] { return Field::parse(s); });
}

FieldElement load_element(Field f, const Node& n) {
    if (n.value().is_number_integer()) return f.from_int(n.integer());
    if (!n.is_string()) n.fail("expected a field element (integer or string)");
    std::string s = n.str();
    return at_node(n, [&] { return f.parse_element(s); });
}

Vector load_vector(Field f, const Node& n, std::optional<size_t> length) {
    size_t len = n.size();
    if (length && len != *length)
        n.fail("expected " + std::to_string(*length) + " entries, found " + std::to_string(len));
    Vector v;
    for (size_t i = 0; i < len; ++i) v.push_back(load_element(f, n[i]));
    return v;
}

Matrix load_matrix(Field f, const Node& n, std::optional<size_t> rows, std::optional<size_t> cols) {
    size_t r = n.size();
    if (rows && r != *rows) n.fail("expected " + std::to_string(*rows) + " rows, found " + std::to_string(r));
    std::optional<size_t> c = cols;
    if (r == 0) return Matrix(f, 0, cols.value_or(0));
    if (!c) c = n[0].size();
    Matrix m(f, r, *c);
    for (size_t i = 0; i < r; ++i) {
        Vector row = load_vector(f, n[i], *c);
        for (size_t j = 0; j < *c; ++j) m(i, j) = row[j];
    }
    return m;
}

// ---------------------------------------------------------------- representations

QuiverRep rep_argument(const std::string& text) {
    if (text == "threeloop-generic") return threeloop_generic(generic_point_field());
    if (text == "kronecker-generic") return kronecker_generic(generic_point_field());
    if (text == "kronecker-perp") return kronecker_perp_object(generic_point_field());
    if (text.size() > 5 && text.substr(text.size() - 5) == ".json") return load_rep(Node::root(Document::load(text)));
    throw Error(ErrorCode::InvalidArgument, "unknown representation '" + text +
                                                "' (builtin: threeloop-generic, kronecker-generic, kronecker-perp; "
                                                "or a .json file)");
}

QuiverRep load_rep(const Node& n) {
    if (n.is_string()) {
        std::string s = n.str();
        return at_node(n, [&] { return rep_argument(s); });
    }
    Quiver q = load_quiver(n.at("quiver"));
    Field f = load_field(n.at("field"));
    Node dn = n.at("dims");
    if (dn.size() != size_t(q.num_vertices()))
        dn.fail("expected " + std::to_string(q.num_vertices()) + " dimensions");
    DimVector dims;
    for (size_t i = 0; i < dn.size(); ++i) {
        long d = dn[i].integer();
        if (d < 0) dn[i].fail("dimensions must be nonnegative");
        dims.push_back(d);
    }
    Node an = n.at("arrows");
    std::vector<Matrix> mats;
    for (const auto& a : q.arrows()) {
        size_t rows = size_t(dims[size_t(a.head)]), cols = size_t(dims[size_t(a.tail)]);
        auto m = an.find(a.id);
        if (!m) {
            if (rows * cols != 0) an.fail("missing matrix for arrow '" + a.id + "'");
            mats.emplace_back(f, rows, cols);
            continue;
        }
        mats.push_back(load_matrix(f, *m, rows, rows ? std::optional<size_t>(cols) : std::nullopt));
        if (rows == 0) mats.back() = Matrix(f, 0, cols);
    }
    for (const auto& k : an.keys())
        if (![&] {
                for (const auto& a : q.arrows())
                    if (a.id == k) return true;
                return false;
            }())
            an.at(k).fail("no arrow named '" + k + "'");
    return at_node(n, [&] { return QuiverRep(q, f, dims, mats); });
}

// ---------------------------------------------------------------- algebras and modules

std::vector<std::string> builtin_algebras() {
    return {"k",       "dual-numbers",   "truncated3", "upper-triangular", "matrix2",
            "massey",  "massey-minus",   "massey-cohomology", "acyclic-extension", "matrix-dg"};
}

GradedAlgebra algebra_argument(const std::string& text) {
    Field q = Field::rationals();
    if (text == "k") return ground_algebra(q);
    if (text == "dual-numbers") return dual_numbers(q);
    if (text == "truncated3") return truncated_polynomial(q, 3);
    if (text == "upper-triangular") return upper_triangular2(q);
    if (text == "matrix2") return matrix_algebra2(q);
    if (text == "massey") return massey_algebra(q, 1);
    if (text == "massey-minus") return massey_algebra(q, -1);
    if (text == "massey-cohomology") return massey_cohomology(q);
    if (text == "acyclic-extension") return acyclic_extension(q);
    if (text == "matrix-dg") return matrix_dg_algebra(q);
    if (text.size() > 5 && text.substr(text.size() - 5) == ".json")
        return load_algebra(Node::root(Document::load(text)));
    std::string names;
    for (const auto& b : builtin_algebras()) names += (names.empty() ? "" : ", ") + b;
    throw Error(ErrorCode::InvalidArgument, "unknown algebra '" + text + "' (builtin: " + names + "; or a .json file)");
}

namespace {

size_t name_index(const std::vector<std::string>& names, const Node& n, const std::string& what) {
    std::string s = n.str();
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == s) return i;
    n.fail("unknown " + what + " '" + s + "'");
}

size_t key_index(const std::vector<std::string>& names, const Node& parent, const std::string& key,
                 const std::string& what) {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == key) return i;
    parent.at(key).fail("unknown " + what + " '" + key + "'");
}

// {"name": coefficient, ...} over the given basis names
Vector load_combination(Field f, const std::vector<std::string>& names, const Node& n) {
    Vector v = zero_vector(f, names.size());
    for (const auto& k : n.keys()) v[key_index(names, n, k, "basis element")] += load_element(f, n.at(k));
    return v;
}

std::vector<int> load_degrees(const Node& parent, size_t count) {
    auto dn = parent.find("degrees");
    if (!dn) return std::vector<int>(count, 0);
    if (dn->size() != count) dn->fail("expected " + std::to_string(count) + " degrees");
    std::vector<int> out;
    for (size_t i = 0; i < count; ++i) out.push_back(int((*dn)[i].integer()));
    return out;
}

std::vector<std::string> load_names(const Node& n) {
    std::vector<std::string> out;
    for (size_t i = 0; i < n.size(); ++i) {
        std::string s = n[i].str();
        for (const auto& prev : out)
            if (prev == s) n[i].fail("duplicate name '" + s + "'");
        out.push_back(s);
    }
    if (out.empty()) n.fail("expected at least one basis element");
    return out;
}

}  // namespace

GradedAlgebra load_algebra(const Node& n) {
    if (n.is_string()) {
        std::string s = n.str();
        return at_node(n, [&] { return algebra_argument(s); });
    }
    Field f = load_field(n.at("field"));
    std::vector<std::string> names = load_names(n.at("names"));
    size_t dim = names.size();
    std::vector<int> degrees = load_degrees(n, dim);
    Node un = n.at("unit");
    Vector unit = un.is_string() ? unit_vector(f, dim, name_index(names, un, "basis element"))
                                 : load_combination(f, names, un);
    std::vector<std::vector<Vector>> prod(dim, std::vector<Vector>(dim, zero_vector(f, dim)));
    if (auto pn = n.find("products")) {
        for (const auto& key : pn->keys()) {
            auto star = key.find('*');
            if (star == std::string::npos) pn->at(key).fail("product keys look like 'a*b'");
            size_t i = key_index(names, *pn, key.substr(0, star), "basis element");
            size_t j = key_index(names, *pn, key.substr(star + 1), "basis element");
            prod[i][j] = load_combination(f, names, pn->at(key));
        }
    }
    // the unit acts as the identity unless the file says otherwise
    std::optional<size_t> single;
    size_t nz = 0;
    for (size_t i = 0; i < dim; ++i)
        if (!unit[i].is_zero()) ++nz, single = i;
    if (nz == 1 && unit[*single].is_one()) {
        auto pn = n.find("products");
        for (size_t i = 0; i < dim; ++i) {
            auto given = [&](size_t a, size_t b) { return pn && pn->value().contains(names[a] + "*" + names[b]); };
            if (!given(*single, i)) prod[*single][i] = unit_vector(f, dim, i);
            if (!given(i, *single)) prod[i][*single] = unit_vector(f, dim, i);
        }
    }
    std::optional<Matrix> d;
    if (auto dn = n.find("differential")) {
        Matrix m(f, dim, dim);
        for (const auto& key : dn->keys()) {
            size_t c = key_index(names, *dn, key, "basis element");
            Vector col = load_combination(f, names, dn->at(key));
            for (size_t r = 0; r < dim; ++r) m(r, c) = col[r];
        }
        d = m;
    }
    return at_node(n, [&] { return GradedAlgebra(f, names, degrees, unit, prod, d); });
}

namespace {

std::vector<Matrix> load_action(const GradedAlgebra& b, const Node& n, size_t dim, bool identity_on_unit) {
    Field f = b.field();
    std::vector<Matrix> out(b.dim(), Matrix(f, dim, dim));
    std::vector<bool> given(b.dim(), false);
    for (const auto& key : n.keys()) {
        size_t i = key_index(b.names(), n, key, "basis element");
        out[i] = load_matrix(f, n.at(key), dim, dim);
        given[i] = true;
    }
    if (identity_on_unit) {
        size_t nz = 0, where = 0;
        for (size_t i = 0; i < b.dim(); ++i)
            if (!b.unit()[i].is_zero()) ++nz, where = i;
        if (nz == 1 && b.unit()[where].is_one() && !given[where]) out[where] = Matrix::identity(f, dim);
    }
    return out;
}

}  // namespace

GradedBimodule load_bimodule(const GradedAlgebra& b, const Node& n) {
    if (n.is_string()) {
        if (n.str() == "regular") return regular_bimodule(b);
        n.fail("unknown bimodule '" + n.str() + "' (builtin: regular)");
    }
    std::vector<std::string> names = load_names(n.at("names"));
    std::vector<int> degrees = load_degrees(n, names.size());
    auto left = load_action(b, n.at("left"), names.size(), true);
    auto right = load_action(b, n.at("right"), names.size(), true);
    return at_node(n, [&] { return GradedBimodule(b, names, degrees, left, right); });
}

LeftModule load_left_module(const GradedAlgebra& b, const Node& n) {
    if (n.is_string()) {
        std::string s = n.str();
        if (s == "regular") return regular_module(b);
        if (s == "column") return at_node(n, [&] { return column_module(b); });
        n.fail("unknown module '" + s + "' (builtin: regular, column)");
    }
    if (auto an = n.find("augmentation")) {
        Vector eps = load_combination(b.field(), b.names(), *an);
        return at_node(*an, [&] { return augmentation_module(b, eps); });
    }
    long dim = n.at("dim").integer();
    if (dim < 0) n.at("dim").fail("dimension must be nonnegative");
    auto action = load_action(b, n.at("action"), size_t(dim), true);
    return at_node(n, [&] { return LeftModule(b, action); });
}

KoszulInput load_koszul(const Node& n) {
    Field f = load_field(n.at("field"));
    long dim = n.at("dim").integer();
    if (dim < 0) n.at("dim").fail("dimension must be nonnegative");
    Node dn = n.at("delta");
    std::vector<Matrix> delta;
    for (size_t i = 0; i < dn.size(); ++i) delta.push_back(load_matrix(f, dn[i], size_t(dim), size_t(dim)));
    KoszulBimodule m = at_node(n, [&] { return KoszulBimodule(f, size_t(dim), delta); });
    std::vector<Vector> e;
    if (auto en = n.find("derivation")) {
        if (en->size() != delta.size()) en->fail("expected one vector per operator");
        for (size_t i = 0; i < en->size(); ++i) e.push_back(load_vector(f, (*en)[i], size_t(dim)));
    }
    return {m, e};
}

TwoStepObject load_two_step(const Node& n) {
    QuiverRep u = load_rep(n.at("u")), v = load_rep(n.at("v"));
    Node pn = n.at("phi21");
    std::vector<Vector> phi;
    for (size_t i = 0; i < pn.size(); ++i) phi.push_back(load_vector(u.field(), pn[i]));
    return at_node(n, [&] { return TwoStepObject(u, v, phi); });
}

AlgebraMorphismFixture load_algebra_morphism(const Node& n) {
    GradedAlgebra a = load_algebra(n.at("source")), c = load_algebra(n.at("target"));
    Matrix phi = load_matrix(a.field(), n.at("phi"), c.dim(), a.dim());
    return at_node(n, [&] {
        return AlgebraMorphismFixture{"input", AInftyAlgebra::from_dg(a), AInftyAlgebra::from_dg(c), phi};
    });
}

StructureFixture load_structure(const Node& n) {
    GradedAlgebra b = load_algebra(n.at("algebra"));
    std::vector<std::string> names = load_names(n.at("names"));
    std::vector<int> degrees = load_degrees(n, names.size());
    Matrix d(b.field(), names.size(), names.size());
    if (auto dn = n.find("d")) d = load_matrix(b.field(), *dn, names.size(), names.size());
    auto action = load_action(b, n.at("action"), names.size(), true);
    return at_node(n, [&] {
        return StructureFixture{"input", AInftyAlgebra::from_dg(b), GradedSpace(names, degrees), d, action};
    });
}

}  // namespace cli

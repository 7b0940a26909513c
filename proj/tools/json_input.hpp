#pragma once

// JSON input files with source positions. nlohmann::json does not keep the
// location of values, so a second SAX pass records the line and column of
// every JSON pointer; schema errors raised through Node point at the value
// (or the key) that caused them.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "exactlift/ainfty.hpp"
#include "exactlift/error.hpp"
#include "exactlift/hochschild.hpp"
#include "exactlift/lifting.hpp"
#include "exactlift/rep.hpp"

namespace cli {

using json = nlohmann::json;

struct Position {
    int line = 1, column = 1;
};

class Document {
public:
    // throws xl::ParseError on malformed JSON
    static std::shared_ptr<Document> parse(std::string text, std::string source);
    static std::shared_ptr<Document> load(const std::string& path);

    const json& root() const { return root_; }
    const std::string& source() const { return source_; }
    Position position(const std::string& pointer) const;

private:
    std::string source_;
    json root_;
    std::map<std::string, Position> positions_;
};

class Node {
public:
    Node(std::shared_ptr<const Document> doc, const json* value, std::string pointer)
        : doc_(std::move(doc)), v_(value), ptr_(std::move(pointer)) {}
    static Node root(std::shared_ptr<const Document> doc) { return Node(doc, &doc->root(), ""); }

    const json& value() const { return *v_; }
    const std::string& pointer() const { return ptr_; }
    bool is_string() const { return v_->is_string(); }
    bool is_object() const { return v_->is_object(); }
    bool is_array() const { return v_->is_array(); }

    Node at(const std::string& key) const;  // required member
    std::optional<Node> find(const std::string& key) const;
    Node operator[](size_t i) const;
    size_t size() const;  // array length
    std::vector<std::string> keys() const;

    std::string str() const;
    long integer() const;
    bool boolean() const;

    [[noreturn]] void fail(const std::string& message) const;

private:
    std::shared_ptr<const Document> doc_;
    const json* v_;
    std::string ptr_;
};

// Runs f and re-raises library errors at the position of n.
template <class F>
auto at_node(const Node& n, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const xl::ParseError& e) {
        // a parse error inside a string value: keep the offset within the string
        n.fail(e.detail() + (e.line() > 1 ? " at line " + std::to_string(e.line()) + " of the value" : "") +
               (e.column() > 1 ? " at character " + std::to_string(e.column()) : ""));
    } catch (const xl::Error& e) {
        n.fail(e.what());
    }
}

// A quiver name ("kronecker4") or {"vertices": [...], "arrows": [{"id", "tail", "head"}]}
xl::Quiver load_quiver(const Node& n);
xl::Quiver quiver_argument(const std::string& text);
xl::Field load_field(const Node& n);
xl::FieldElement load_element(xl::Field f, const Node& n);
xl::Vector load_vector(xl::Field f, const Node& n, std::optional<size_t> length = {});
// rows of entries
xl::Matrix load_matrix(xl::Field f, const Node& n, std::optional<size_t> rows = {}, std::optional<size_t> cols = {});

// {"quiver", "field", "dims", "arrows": {id: matrix}} or a builtin name
xl::QuiverRep load_rep(const Node& n);
xl::QuiverRep rep_argument(const std::string& text);

// {"field", "names", "degrees"?, "unit", "products": {"a*b": {"c": 1}}, "differential"?: {"u": {"p": 1}}}
// or a builtin name
xl::GradedAlgebra load_algebra(const Node& n);
xl::GradedAlgebra algebra_argument(const std::string& text);
std::vector<std::string> builtin_algebras();

// "regular", or {"names", "degrees"?, "left": {basis name: matrix}, "right": {...}}
xl::GradedBimodule load_bimodule(const xl::GradedAlgebra& b, const Node& n);
// "regular", "column", {"augmentation": {basis name: value}}, or {"dim", "action": {basis name: matrix}}
xl::LeftModule load_left_module(const xl::GradedAlgebra& b, const Node& n);

// {"field", "dim", "delta": [matrix], "derivation"?: [vector]}
struct KoszulInput {
    xl::KoszulBimodule module;
    std::vector<xl::Vector> derivation;
};
KoszulInput load_koszul(const Node& n);

// {"u": rep, "v": rep, "phi21": [vector per variable]}
xl::TwoStepObject load_two_step(const Node& n);

// {"source": algebra, "target": algebra, "phi": matrix (dim target x dim source)}
xl::AlgebraMorphismFixture load_algebra_morphism(const Node& n);
// {"algebra", "names", "degrees", "d"?: matrix, "action": {basis name: matrix}}
xl::StructureFixture load_structure(const Node& n);

}  // namespace cli

// GROBID TEI reader. Builds a small element tree with expat, then walks the
// header, body and table figures.

#include <expat.h>

#include <map>
#include <memory>
#include <variant>

#include "tdms/document.hpp"
#include "tdms/error.hpp"
#include "tdms/text.hpp"

namespace tdms {

namespace {

struct Element;
using Node = std::variant<std::string, std::unique_ptr<Element>>;

struct Element {
    std::string name;  // local name, namespace prefix stripped
    std::map<std::string, std::string> attrs;
    std::vector<Node> children;

    const std::string* attr(const std::string& key) const {
        auto it = attrs.find(key);
        return it == attrs.end() ? nullptr : &it->second;
    }

    const Element* child(std::string_view n) const {
        for (const auto& c : children)
            if (auto* e = std::get_if<std::unique_ptr<Element>>(&c); e && (*e)->name == n) return e->get();
        return nullptr;
    }

    template <typename F>
    void for_each_child(F&& f) const {
        for (const auto& c : children)
            if (auto* e = std::get_if<std::unique_ptr<Element>>(&c)) f(**e);
    }
};

std::string local_name(const char* qualified) {
    std::string_view q(qualified);
    // expat namespace mode joins uri and local name with '|'
    if (auto bar = q.rfind('|'); bar != std::string_view::npos) return std::string(q.substr(bar + 1));
    if (auto colon = q.find(':'); colon != std::string_view::npos && q.substr(0, colon) != "xml")
        return std::string(q.substr(colon + 1));
    return std::string(q);
}

struct TreeBuilder {
    std::unique_ptr<Element> root;
    std::vector<Element*> stack;

    static void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
        auto* self = static_cast<TreeBuilder*>(user);
        auto el = std::make_unique<Element>();
        el->name = local_name(name);
        for (int i = 0; attrs[i]; i += 2) {
            std::string key = attrs[i];
            if (key.find('|') != std::string::npos) {
                // xml namespace attributes (xml:id) come through as uri|id
                auto bar = key.rfind('|');
                std::string uri = key.substr(0, bar);
                key = (uri == "http://www.w3.org/XML/1998/namespace" ? "xml:" : "") + key.substr(bar + 1);
            }
            el->attrs[key] = attrs[i + 1];
        }
        Element* raw = el.get();
        if (self->stack.empty()) {
            self->root = std::move(el);
        } else {
            self->stack.back()->children.emplace_back(std::move(el));
        }
        self->stack.push_back(raw);
    }

    static void on_end(void* user, const XML_Char*) { static_cast<TreeBuilder*>(user)->stack.pop_back(); }

    static void on_text(void* user, const XML_Char* s, int len) {
        auto* self = static_cast<TreeBuilder*>(user);
        if (self->stack.empty()) return;
        auto& kids = self->stack.back()->children;
        if (!kids.empty())
            if (auto* str = std::get_if<std::string>(&kids.back())) {
                str->append(s, static_cast<std::size_t>(len));
                return;
            }
        kids.emplace_back(std::string(s, static_cast<std::size_t>(len)));
    }
};

std::unique_ptr<Element> parse_tree(std::string_view xml) {
    TreeBuilder builder;
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreateNS(nullptr, '|'),
                                                                        &XML_ParserFree);
    XML_SetUserData(parser.get(), &builder);
    XML_SetElementHandler(parser.get(), &TreeBuilder::on_start, &TreeBuilder::on_end);
    XML_SetCharacterDataHandler(parser.get(), &TreeBuilder::on_text);
    if (XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE) == XML_STATUS_ERROR) {
        auto offset = XML_GetCurrentByteIndex(parser.get());
        throw ParseError(std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())),
                         offset < 0 ? 0 : static_cast<std::size_t>(offset));
    }
    return std::move(builder.root);
}

bool skipped_in_prose(const Element& e) {
    return e.name == "figure" || e.name == "table" || e.name == "note" || e.name == "head" || e.name == "listBibl";
}

// Concatenated descendant text. With `prose` set, figures, notes and nested
// headings are left out so body text is not duplicated.
void collect_text(const Element& e, std::string& out, bool prose) {
    for (const auto& c : e.children) {
        if (auto* s = std::get_if<std::string>(&c)) {
            out += *s;
        } else {
            const Element& child = *std::get<std::unique_ptr<Element>>(c);
            if (prose && skipped_in_prose(child)) continue;
            bool block = child.name == "p" || child.name == "div" || child.name == "s";
            if (block) out += ' ';
            collect_text(child, out, prose);
            if (block) out += ' ';
        }
    }
}

std::string text_of(const Element& e, bool prose = false) {
    std::string out;
    collect_text(e, out, prose);
    return text::squash_whitespace(text::nfc(out));
}

const Element* find_path(const Element* e, std::initializer_list<std::string_view> path) {
    for (auto name : path) {
        if (!e) return nullptr;
        e = e->child(name);
    }
    return e;
}

bool mentions_bold(const std::string* rend) { return rend && rend->find("bold") != std::string::npos; }

bool any_rend(const Element& e) {
    if (e.attr("rend")) return true;
    bool found = false;
    e.for_each_child([&](const Element& c) { found = found || any_rend(c); });
    return found;
}

bool bold_inside(const Element& e) {
    if (mentions_bold(e.attr("rend"))) return true;
    bool found = false;
    e.for_each_child([&](const Element& c) { found = found || bold_inside(c); });
    return found;
}

std::size_t span_attr(const Element& e, const char* key) {
    const std::string* v = e.attr(key);
    if (!v) return 1;
    try {
        return static_cast<std::size_t>(std::stoul(*v));
    } catch (const std::exception&) {
        return 0;  // rejected later as broken geometry
    }
}

RawTable read_table_figure(const Element& fig, std::size_t index) {
    RawTable t;
    const std::string* id = fig.attr("xml:id");
    t.table_id = id ? *id : "tab_" + std::to_string(index);
    const Element* desc = fig.child("figDesc");
    t.caption_present = desc != nullptr;
    t.caption = desc ? text_of(*desc) : std::string();
    const Element* table = fig.child("table");
    if (!table) return t;
    t.has_typeface_info = any_rend(*table);
    table->for_each_child([&](const Element& row) {
        if (row.name != "row") return;
        std::vector<RawCell> cells;
        row.for_each_child([&](const Element& cell) {
            if (cell.name != "cell") return;
            RawCell rc;
            rc.text = text_of(cell);
            rc.is_bold = bold_inside(cell);
            rc.colspan = span_attr(cell, "cols");
            rc.rowspan = span_attr(cell, "rows");
            cells.push_back(std::move(rc));
        });
        t.rows.push_back(std::move(cells));
    });
    return t;
}

void collect_tables(const Element& e, std::vector<RawTable>& out) {
    e.for_each_child([&](const Element& c) {
        if (c.name == "figure") {
            const std::string* type = c.attr("type");
            if (type && *type == "table") out.push_back(read_table_figure(c, out.size()));
            return;
        }
        collect_tables(c, out);
    });
}

void read_divs(const Element& container, RawDocument& doc) {
    std::string loose;  // paragraphs sitting directly in <body>
    container.for_each_child([&](const Element& c) {
        if (c.name == "div") {
            const Element* head = c.child("head");
            bool nested = false;
            c.for_each_child([&](const Element& g) { nested = nested || g.name == "div"; });
            std::string own;
            c.for_each_child([&](const Element& g) {
                if (g.name == "div" || skipped_in_prose(g)) return;
                own += ' ';
                collect_text(g, own, true);
            });
            own = text::squash_whitespace(text::nfc(own));
            if (!own.empty() || !nested) {
                Section s;
                s.heading = head ? text_of(*head) : std::string();
                s.body = std::move(own);
                s.sentences = split_sentences(s.body);
                doc.sections.push_back(std::move(s));
            }
            if (nested) read_divs(c, doc);
        } else if (c.name == "p") {
            loose += ' ';
            collect_text(c, loose, true);
        }
    });
    loose = text::squash_whitespace(text::nfc(loose));
    if (!loose.empty()) {
        Section s;
        s.body = std::move(loose);
        s.sentences = split_sentences(s.body);
        doc.sections.push_back(std::move(s));
    }
}

}  // namespace

RawDocument parse_tei(std::string_view xml_bytes, std::string doc_id) {
    if (text::trim(xml_bytes).empty()) throw EmptyDocumentError("empty document");
    auto root = parse_tree(xml_bytes);

    RawDocument doc;
    doc.doc_id = std::move(doc_id);

    const Element* header = root->name == "teiHeader" ? root.get() : root->child("teiHeader");
    if (const Element* stmt = find_path(header, {"fileDesc", "titleStmt"})) {
        const Element* chosen = nullptr;
        stmt->for_each_child([&](const Element& t) {
            if (t.name != "title") return;
            const std::string* type = t.attr("type");
            if (!chosen || (type && *type == "main")) chosen = &t;
        });
        if (chosen) doc.title = text_of(*chosen);
    }
    if (const Element* abs = find_path(header, {"profileDesc", "abstract"})) doc.abstract = text_of(*abs, true);

    std::vector<RawTable> raw_tables;
    if (const Element* textEl = root->child("text")) {
        if (const Element* body = textEl->child("body")) read_divs(*body, doc);
        collect_tables(*textEl, raw_tables);
    }
    doc.tables = finalize_tables(raw_tables, doc.warnings);

    if (doc.title.empty() && doc.abstract.empty() && doc.sections.empty() && doc.tables.empty())
        throw EmptyDocumentError("TEI document has no title, abstract, sections or tables");
    if (doc.title.empty()) doc.warnings.push_back("missing title");
    if (doc.abstract.empty()) doc.warnings.push_back("missing abstract");
    return doc;
}

std::vector<TableStruct> extract_tables(std::string_view source, SourceFormat format,
                                        std::vector<std::string>* warnings) {
    RawDocument doc;
    try {
        doc = format == SourceFormat::tei ? parse_tei(source) : parse_structured(source);
    } catch (const EmptyDocumentError&) {
        return {};
    }
    if (warnings) warnings->insert(warnings->end(), doc.warnings.begin(), doc.warnings.end());
    return std::move(doc.tables);
}

}  // namespace tdms

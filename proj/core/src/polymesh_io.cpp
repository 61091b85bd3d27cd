#include "fvg/polymesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fvg/error.hpp"

namespace fvg {

namespace {

struct Token {
    enum class Kind { word, punct, end };
    Kind kind = Kind::end;
    std::string text;
    std::size_t line = 0;
};

bool isPunct(char c) {
    return c == '(' || c == ')' || c == '{' || c == '}' || c == ';';
}

class Tokenizer {
public:
    Tokenizer(std::string text, std::string file) : text_(std::move(text)), file_(std::move(file)) {}

    Token next() {
        skipSpaceAndComments();
        Token t;
        t.line = line_;
        if (pos_ >= text_.size()) {
            return t;
        }
        const char c = text_[pos_];
        if (isPunct(c)) {
            t.kind = Token::Kind::punct;
            t.text = std::string(1, c);
            ++pos_;
            return t;
        }
        if (c == '"') {
            const auto close = text_.find('"', pos_ + 1);
            if (close == std::string::npos) {
                error("unterminated string", line_);
            }
            t.kind = Token::Kind::word;
            t.text = text_.substr(pos_ + 1, close - pos_ - 1);
            pos_ = close + 1;
            return t;
        }
        const auto start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && !isPunct(text_[pos_]) &&
               !startsComment()) {
            ++pos_;
        }
        t.kind = Token::Kind::word;
        t.text = text_.substr(start, pos_ - start);
        return t;
    }

    Token expectWord(std::string_view what) {
        Token t = next();
        if (t.kind != Token::Kind::word) {
            error("expected " + std::string(what) + ", found " + describe(t), t.line);
        }
        return t;
    }

    void expectPunct(char p) {
        Token t = next();
        if (t.kind != Token::Kind::punct || t.text[0] != p) {
            error(std::string("expected '") + p + "', found " + describe(t), t.line);
        }
    }

    [[noreturn]] void error(const std::string& what, std::size_t line) const {
        throw ParseError(file_ + ": " + what, line);
    }

    static std::string describe(const Token& t) {
        return t.kind == Token::Kind::end ? "end of file" : "'" + t.text + "'";
    }

private:
    bool startsComment() const {
        return text_[pos_] == '/' && pos_ + 1 < text_.size() && (text_[pos_ + 1] == '/' || text_[pos_ + 1] == '*');
    }

    void skipSpaceAndComments() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                const auto startLine = line_;
                const auto close = text_.find("*/", pos_ + 2);
                if (close == std::string::npos) {
                    error("unterminated block comment", startLine);
                }
                line_ += static_cast<std::size_t>(std::count(text_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                                             text_.begin() + static_cast<std::ptrdiff_t>(close), '\n'));
                pos_ = close + 2;
            } else {
                break;
            }
        }
    }

    std::string text_;
    std::string file_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class T>
T toNumber(Tokenizer& tok, const Token& t, std::string_view what) {
    T value{};
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (t.kind == Token::Kind::word && !t.text.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (t.kind != Token::Kind::word || ec != std::errc{} || ptr != last) {
        tok.error("expected " + std::string(what) + ", found " + Tokenizer::describe(t), t.line);
    }
    return value;
}

/// Opens a file, skips an optional FoamFile header and returns the first body token.
Token openBody(Tokenizer& tok) {
    Token t = tok.next();
    if (t.kind == Token::Kind::word && t.text == "FoamFile") {
        tok.expectPunct('{');
        int depth = 1;
        while (depth > 0) {
            Token h = tok.next();
            if (h.kind == Token::Kind::end) {
                tok.error("unterminated FoamFile header", h.line);
            }
            if (h.kind == Token::Kind::punct && h.text == "{") {
                ++depth;
            } else if (h.kind == Token::Kind::punct && h.text == "}") {
                --depth;
            }
        }
        t = tok.next();
    }
    return t;
}

/// Parses `<count> ( entry* )`, calling `entry(tok, firstToken)` for each
/// entry; checks the entry count against the declared count.
template <class Entry>
std::size_t parseList(Tokenizer& tok, Entry&& entry) {
    const Token countTok = openBody(tok);
    const auto count = toNumber<long long>(tok, countTok, "list size");
    if (count < 0) {
        tok.error("negative list size", countTok.line);
    }
    tok.expectPunct('(');
    std::size_t n = 0;
    for (;;) {
        Token t = tok.next();
        if (t.kind == Token::Kind::punct && t.text == ")") {
            if (n != static_cast<std::size_t>(count)) {
                tok.error("list declares " + std::to_string(count) + " entries but contains " + std::to_string(n),
                          t.line);
            }
            break;
        }
        if (t.kind == Token::Kind::end) {
            tok.error("unexpected end of file inside list (" + std::to_string(n) + " of " + std::to_string(count) +
                          " entries read)",
                      t.line);
        }
        if (n == static_cast<std::size_t>(count)) {
            tok.error("list declares " + std::to_string(count) + " entries but contains more", t.line);
        }
        entry(tok, t);
        ++n;
    }
    Token trailing = tok.next();
    if (trailing.kind != Token::Kind::end) {
        tok.error("unexpected " + Tokenizer::describe(trailing) + " after list", trailing.line);
    }
    return n;
}

Tokenizer openFile(const std::filesystem::path& dir, const char* name) {
    return Tokenizer(slurp(dir / name), name);
}

std::vector<Label> readLabels(const std::filesystem::path& dir, const char* name) {
    Tokenizer tok = openFile(dir, name);
    std::vector<Label> out;
    parseList(tok, [&](Tokenizer& t, const Token& first) { out.push_back(toNumber<Label>(t, first, "label")); });
    return out;
}

std::vector<Vec3> readPoints(const std::filesystem::path& dir) {
    Tokenizer tok = openFile(dir, "points");
    std::vector<Vec3> out;
    parseList(tok, [&](Tokenizer& t, const Token& first) {
        if (first.kind != Token::Kind::punct || first.text != "(") {
            t.error("expected '(' starting a point, found " + Tokenizer::describe(first), first.line);
        }
        Vec3 p;
        p.x = toNumber<double>(t, t.next(), "coordinate");
        p.y = toNumber<double>(t, t.next(), "coordinate");
        p.z = toNumber<double>(t, t.next(), "coordinate");
        t.expectPunct(')');
        out.push_back(p);
    });
    return out;
}

FaceList readFaces(const std::filesystem::path& dir) {
    Tokenizer tok = openFile(dir, "faces");
    FaceList out;
    std::vector<Label> verts;
    parseList(tok, [&](Tokenizer& t, const Token& first) {
        const auto k = toNumber<long long>(t, first, "face size");
        if (k < 0) {
            t.error("negative face size", first.line);
        }
        t.expectPunct('(');
        verts.clear();
        for (long long i = 0; i < k; ++i) {
            verts.push_back(toNumber<Label>(t, t.next(), "point label"));
        }
        t.expectPunct(')');
        out.push_back(std::span<const Label>(verts));
    });
    return out;
}

std::vector<Patch> readBoundary(const std::filesystem::path& dir) {
    Tokenizer tok = openFile(dir, "boundary");
    std::vector<Patch> out;
    parseList(tok, [&](Tokenizer& t, const Token& first) {
        if (first.kind != Token::Kind::word) {
            t.error("expected patch name, found " + Tokenizer::describe(first), first.line);
        }
        Patch p;
        p.name = first.text;
        bool haveType = false, haveN = false, haveStart = false;
        t.expectPunct('{');
        for (;;) {
            Token key = t.next();
            if (key.kind == Token::Kind::punct && key.text == "}") {
                break;
            }
            if (key.kind != Token::Kind::word) {
                t.error("expected keyword in patch '" + p.name + "', found " + Tokenizer::describe(key), key.line);
            }
            if (key.text == "type") {
                Token type = t.expectWord("patch type");
                if (type.text != "patch" && type.text != "wall") {
                    t.error("unsupported patch type '" + type.text + "'", type.line);
                }
                p.bc = BoundaryCondition::zeroGradient();
                haveType = true;
                t.expectPunct(';');
            } else if (key.text == "nFaces") {
                p.nFaces = toNumber<Label>(t, t.next(), "nFaces");
                haveN = true;
                t.expectPunct(';');
            } else if (key.text == "startFace") {
                p.startFace = toNumber<Label>(t, t.next(), "startFace");
                haveStart = true;
                t.expectPunct(';');
            } else {
                // Other entries (inGroups, physicalType, ...) are skipped up to ';'.
                int depth = 0;
                for (;;) {
                    Token v = t.next();
                    if (v.kind == Token::Kind::end) {
                        t.error("unexpected end of file in patch '" + p.name + "'", v.line);
                    }
                    if (v.kind == Token::Kind::punct) {
                        if (v.text == "(" || v.text == "{") {
                            ++depth;
                        } else if (v.text == ")" || v.text == "}") {
                            if (--depth < 0) {
                                t.error("unbalanced brackets in patch '" + p.name + "'", v.line);
                            }
                        } else if (v.text == ";" && depth == 0) {
                            break;
                        }
                    }
                }
            }
        }
        if (!haveType || !haveN || !haveStart) {
            t.error("patch '" + p.name + "' needs type, nFaces and startFace", first.line);
        }
        out.push_back(std::move(p));
    });
    return out;
}

std::ofstream create(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

void header(std::ostream& os, const char* cls, const char* object) {
    os << "/*--------------------------------*- C++ -*----------------------------------*\\\n"
          "  written by fvgather\n"
          "\\*---------------------------------------------------------------------------*/\n"
          "FoamFile\n{\n"
          "    version     2.0;\n"
          "    format      ascii;\n"
          "    class       "
       << cls
       << ";\n"
          "    location    \"constant/polyMesh\";\n"
          "    object      "
       << object << ";\n}\n\n";
}

void writeDouble(std::ostream& os, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, res.ptr - buf);
}

void writeLabels(const std::filesystem::path& path, const char* object, const std::vector<Label>& labels) {
    auto os = create(path);
    header(os, "labelList", object);
    os << labels.size() << "\n(\n";
    for (Label l : labels) {
        os << l << '\n';
    }
    os << ")\n";
    if (!os) {
        throw IoError("error writing " + path.string());
    }
}

} // namespace

Mesh readPolyMesh(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("not a directory: " + dir.string());
    }
    Mesh mesh;
    mesh.points = readPoints(dir);
    mesh.faces = readFaces(dir);
    mesh.owner = readLabels(dir, "owner");
    mesh.neighbour = readLabels(dir, "neighbour");
    mesh.patches = readBoundary(dir);

    Label maxLabel = -1;
    for (Label l : mesh.owner) {
        maxLabel = std::max(maxLabel, l);
    }
    for (Label l : mesh.neighbour) {
        maxLabel = std::max(maxLabel, l);
    }
    mesh.nCells = maxLabel + 1;
    validate(mesh);
    return mesh;
}

void writePolyMesh(const Mesh& mesh, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }

    {
        auto os = create(dir / "points");
        header(os, "vectorField", "points");
        os << mesh.points.size() << "\n(\n";
        for (const Vec3& p : mesh.points) {
            os << '(';
            writeDouble(os, p.x);
            os << ' ';
            writeDouble(os, p.y);
            os << ' ';
            writeDouble(os, p.z);
            os << ")\n";
        }
        os << ")\n";
        if (!os) {
            throw IoError("error writing points");
        }
    }
    {
        auto os = create(dir / "faces");
        header(os, "faceList", "faces");
        os << mesh.faces.size() << "\n(\n";
        for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
            const auto face = mesh.faces[f];
            os << face.size() << '(';
            for (std::size_t i = 0; i < face.size(); ++i) {
                os << (i ? " " : "") << face[i];
            }
            os << ")\n";
        }
        os << ")\n";
        if (!os) {
            throw IoError("error writing faces");
        }
    }
    writeLabels(dir / "owner", "owner", mesh.owner);
    writeLabels(dir / "neighbour", "neighbour", mesh.neighbour);
    {
        auto os = create(dir / "boundary");
        header(os, "polyBoundaryMesh", "boundary");
        os << mesh.patches.size() << "\n(\n";
        for (const Patch& p : mesh.patches) {
            os << "    " << p.name << "\n    {\n"
               << "        type            patch;\n"
               << "        nFaces          " << p.nFaces << ";\n"
               << "        startFace       " << p.startFace << ";\n"
               << "    }\n";
        }
        os << ")\n";
        if (!os) {
            throw IoError("error writing boundary");
        }
    }
}

} // namespace fvg

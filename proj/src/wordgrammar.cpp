#include "linkhom/wordgrammar.hpp"

#include <cctype>

namespace linkhom {

ParseError::ParseError(const std::string &msg, size_t pos)
    : std::runtime_error(msg + " at offset " + std::to_string(pos)),
      position(pos) {}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) {
	return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
}

struct Parser {
	const std::string &s;
	size_t pos = 0;

	void skip() {
		while (pos < s.size() &&
		       std::isspace(static_cast<unsigned char>(s[pos])))
			++pos;
	}
	char peek() {
		skip();
		return pos < s.size() ? s[pos] : '\0';
	}
	void expect(char c) {
		if (peek() != c)
			throw ParseError(std::string("expected '") + c + "'", pos);
		++pos;
	}

	std::string ident() {
		size_t start = pos;
		while (pos < s.size() && ident_char(s[pos]))
			++pos;
		return s.substr(start, pos - start);
	}

	CommExpr atom() {
		char c = peek();
		if (c == '[') {
			++pos;
			CommExpr left = word();
			expect(',');
			CommExpr right = word();
			expect(']');
			return CommExpr::bracket(std::move(left), std::move(right));
		}
		if (c == '(') {
			++pos;
			CommExpr inner = word();
			expect(')');
			return inner;
		}
		if (c == '1') {
			++pos;
			return CommExpr::prod({});
		}
		if (!ident_start(c))
			throw ParseError("expected an atom", pos);
		size_t at = pos;
		std::string name = ident();
		// "ln" immediately followed by "[" is the left-normed list sugar.
		if (name == "ln" && pos < s.size() && s[pos] == '[') {
			++pos;
			std::vector<CommExpr> entries;
			entries.push_back(word());
			while (peek() == ',') {
				++pos;
				entries.push_back(word());
			}
			expect(']');
			return CommExpr::left_normed(std::move(entries));
		}
		(void)at;
		return CommExpr::gen(generator_named(name));
	}

	CommExpr factor() {
		CommExpr base = atom();
		if (peek() != '^')
			return base;
		++pos;
		if (peek() == '-') {
			size_t at = pos;
			++pos;
			if (pos >= s.size() || s[pos] != '1')
				throw ParseError("expected -1 exponent", at);
			++pos;
			return CommExpr::inverse(std::move(base));
		}
		return CommExpr::conjugate(std::move(base), atom());
	}

	bool at_word_start() {
		char c = peek();
		return c == '[' || c == '(' || c == '1' || ident_start(c);
	}

	CommExpr word() {
		if (!at_word_start())
			throw ParseError("expected a word", pos);
		std::vector<CommExpr> fs;
		fs.push_back(factor());
		while (at_word_start())
			fs.push_back(factor());
		if (fs.size() == 1)
			return std::move(fs[0]);
		return CommExpr::prod(std::move(fs));
	}
};

std::string gname(Generator g) {
	if (g.index() < 0)
		return g.name();
	return g.name() + std::to_string(g.index());
}

void print_into(const CommExpr &e, std::string &out);

// Nested products flatten away, so parenthesization must look through them.
void flatten(const CommExpr &e, std::vector<const CommExpr *> &out) {
	if (e.kind() == CommExpr::Kind::Prod) {
		for (const CommExpr &c : e.children())
			flatten(c, out);
		return;
	}
	out.push_back(&e);
}

void print_atom(const CommExpr &e, std::string &out) {
	std::vector<const CommExpr *> fs;
	flatten(e, fs);
	if (fs.empty()) {
		out += '1';
		return;
	}
	if (fs.size() == 1) {
		const CommExpr &f = *fs[0];
		if (f.kind() == CommExpr::Kind::Gen ||
		    f.kind() == CommExpr::Kind::Brack) {
			print_into(f, out);
			return;
		}
	}
	out += '(';
	print_into(e, out);
	out += ')';
}

void print_into(const CommExpr &e, std::string &out) {
	switch (e.kind()) {
	case CommExpr::Kind::Gen:
		out += gname(e.gen_value());
		return;
	case CommExpr::Kind::Prod: {
		std::vector<const CommExpr *> fs;
		flatten(e, fs);
		if (fs.empty()) {
			out += '1';
			return;
		}
		for (size_t i = 0; i < fs.size(); ++i) {
			if (i)
				out += ' ';
			print_into(*fs[i], out);
		}
		return;
	}
	case CommExpr::Kind::Inv:
		print_atom(e.children()[0], out);
		out += "^-1";
		return;
	case CommExpr::Kind::Conj:
		print_atom(e.children()[0], out);
		out += '^';
		print_atom(e.children()[1], out);
		return;
	case CommExpr::Kind::Brack:
		out += '[';
		print_into(e.children()[0], out);
		out += ',';
		print_into(e.children()[1], out);
		out += ']';
		return;
	}
}

} // namespace

CommExpr parse_word(const std::string &text) {
	Parser p{text};
	CommExpr e = p.word();
	if (p.peek() != '\0')
		throw ParseError("trailing input", p.pos);
	return e;
}

std::string print_word(const CommExpr &e) {
	std::string out;
	print_into(e, out);
	return out;
}

} // namespace linkhom

#include "driver_gen.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

namespace reasontrans::driver_gen {

using nlohmann::json;

namespace {

std::string sanitize_id(const std::string& id) {
    std::string out;
    for (char c : id) {
        out += std::isspace(static_cast<unsigned char>(c)) ? '_' : c;
    }
    return out.empty() ? "_" : out;
}

bool fits_int32(std::int64_t v) {
    return v >= std::numeric_limits<std::int32_t>::min() && v <= std::numeric_limits<std::int32_t>::max();
}

std::string double_literal(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s = buf;
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string cpp_string_literal(const std::string& s) {
    std::string out = "\"";
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (c < 0x20 || c >= 0x7f) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\%03o", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += "\"";
    return out;
}

std::string java_string_literal(const std::string& s) {
    std::string out = "\"";
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (c < 0x20 || c >= 0x7f) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += "\"";
    return out;
}

// --- C++ literal inference ---

struct CppLiteral {
    bool ok = false;
    std::string type;
    std::string expr;
};

std::string unify_numeric(const std::string& a, const std::string& b) {
    if (a == b) return a;
    if (a == "double" || b == "double") return "double";
    if (a == "long long" || b == "long long") return "long long";
    return a;
}

CppLiteral cpp_value(const json& v);

CppLiteral cpp_array(const json& arr) {
    CppLiteral out;
    std::string elem_type;
    std::vector<std::string> exprs;
    for (const auto& e : arr) {
        CppLiteral lit = cpp_value(e);
        if (!lit.ok) {
            return out;
        }
        if (elem_type.empty()) {
            elem_type = lit.type;
        } else if (elem_type != lit.type) {
            const bool numeric_pair =
                (elem_type == "int" || elem_type == "long long" || elem_type == "double") &&
                (lit.type == "int" || lit.type == "long long" || lit.type == "double");
            if (!numeric_pair) {
                return out;
            }
            elem_type = unify_numeric(elem_type, lit.type);
        }
        exprs.push_back(lit.expr);
    }
    if (elem_type.empty()) {
        elem_type = "int";  // empty array defaults to ints
    }
    out.ok = true;
    out.type = "std::vector<" + elem_type + (elem_type.back() == '>' ? " >" : ">");
    std::string body;
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        if (i > 0) body += ", ";
        body += exprs[i];
    }
    out.expr = out.type + "{" + body + "}";
    return out;
}

CppLiteral cpp_value(const json& v) {
    CppLiteral out;
    if (v.is_boolean()) {
        return {true, "bool", v.get<bool>() ? "true" : "false"};
    }
    if (v.is_number_integer()) {
        const std::int64_t n = v.get<std::int64_t>();
        if (fits_int32(n)) {
            return {true, "int", std::to_string(n)};
        }
        return {true, "long long", std::to_string(n) + "LL"};
    }
    if (v.is_number_float()) {
        return {true, "double", double_literal(v.get<double>())};
    }
    if (v.is_string()) {
        return {true, "std::string", "std::string(" + cpp_string_literal(v.get<std::string>()) + ")"};
    }
    if (v.is_array()) {
        return cpp_array(v);
    }
    return out;  // null / object: unsupported as a typed C++ value
}

// --- Java literal inference (boxed Object expressions) ---

struct JavaLiteral {
    bool ok = false;
    std::string expr;
};

JavaLiteral java_value(const json& v) {
    if (v.is_null()) {
        return {true, "null"};
    }
    if (v.is_boolean()) {
        return {true, std::string("Boolean.valueOf(") + (v.get<bool>() ? "true" : "false") + ")"};
    }
    if (v.is_number_integer()) {
        return {true, "Long.valueOf(" + std::to_string(v.get<std::int64_t>()) + "L)"};
    }
    if (v.is_number_float()) {
        return {true, "Double.valueOf(" + double_literal(v.get<double>()) + ")"};
    }
    if (v.is_string()) {
        return {true, java_string_literal(v.get<std::string>())};
    }
    if (v.is_array()) {
        std::string body;
        for (const auto& e : v) {
            JavaLiteral lit = java_value(e);
            if (!lit.ok) {
                return {};
            }
            if (!body.empty()) body += ", ";
            body += lit.expr;
        }
        return {true, "java.util.Arrays.asList(new Object[]{" + body + "})"};
    }
    return {};
}

}  // namespace

std::string python_cases_json(const TestSuite& suite) {
    json cases = json::array();
    for (const auto& c : suite.cases) {
        cases.push_back({{"case_id", sanitize_id(c.case_id)}, {"args", c.args}, {"expected", c.expected}});
    }
    json spec{{"entry_function", suite.entry_function},
              {"equality_mode", suite.equality_mode == EqualityMode::exact ? "exact" : "float_tolerant"},
              {"epsilon", suite.epsilon},
              {"cases", std::move(cases)}};
    return spec.dump(2) + "\n";
}

std::string python_driver() {
    return R"PY(import json
import math
import sys


def load_candidate():
    ns = {"__name__": "candidate"}
    with open("candidate.py", "r", encoding="utf-8") as fh:
        src = fh.read()
    exec(compile(src, "candidate.py", "exec"), ns)
    return ns


def values_equal(expected, actual, mode, eps):
    if isinstance(expected, bool) or isinstance(actual, bool):
        return isinstance(expected, bool) and isinstance(actual, bool) and expected == actual
    if isinstance(expected, (int, float)) and isinstance(actual, (int, float)):
        if mode == "float_tolerant":
            a, b = float(expected), float(actual)
            if math.isnan(a) and math.isnan(b):
                return True
            return abs(a - b) <= eps * max(1.0, abs(a), abs(b))
        return expected == actual
    if isinstance(expected, list) and isinstance(actual, (list, tuple)):
        return len(expected) == len(actual) and all(
            values_equal(e, a, mode, eps) for e, a in zip(expected, actual)
        )
    if isinstance(expected, dict) and isinstance(actual, dict):
        return set(expected) == set(actual) and all(
            values_equal(v, actual[k], mode, eps) for k, v in expected.items()
        )
    return expected == actual


def sanitize(text):
    return str(text).replace("\n", "\\n").replace("\r", "\\r")


def main():
    idx = int(sys.argv[1])
    with open("cases.json", "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    case = spec["cases"][idx]
    cid = case["case_id"]
    try:
        ns = load_candidate()
        fn = ns.get(spec["entry_function"])
        if not callable(fn):
            print("REASONTRANS CASE %s ERROR entry-function-not-found: %s"
                  % (cid, spec["entry_function"]))
            return
        actual = fn(*case["args"])
        if values_equal(case["expected"], actual, spec["equality_mode"], spec["epsilon"]):
            print("REASONTRANS CASE %s PASS" % cid)
        else:
            print("REASONTRANS CASE %s FAIL expected=%s actual=%s"
                  % (cid, sanitize(repr(case["expected"])), sanitize(repr(actual))))
    except BaseException as exc:  # every failure becomes a verdict line
        print("REASONTRANS CASE %s ERROR %s: %s" % (cid, type(exc).__name__, sanitize(exc)))


if __name__ == "__main__":
    main()
)PY";
}

JavaCandidate java_candidate_file(const std::string& code) {
    static const std::regex public_class(R"(public\s+(?:final\s+|abstract\s+)?(?:class|interface|enum)\s+([A-Za-z_$][A-Za-z0-9_$]*))");
    static const std::regex any_class(R"((?:class|interface|enum)\s+([A-Za-z_$][A-Za-z0-9_$]*))");
    std::smatch m;
    if (std::regex_search(code, m, public_class)) {
        return {m[1].str() + ".java", code};
    }
    if (std::regex_search(code, m, any_class)) {
        return {m[1].str() + ".java", code};
    }
    return {"Candidate.java", "public class Candidate {\n" + code + "\n}\n"};
}

std::string java_driver(const TestSuite& suite) {
    std::ostringstream out;
    out << R"JAVA(import java.io.File;
import java.lang.reflect.Array;
import java.lang.reflect.Method;
import java.lang.reflect.Modifier;
import java.util.ArrayList;
import java.util.List;

public class ReasontransDriver {
)JAVA";
    out << "    static final boolean FLOAT_TOLERANT = "
        << (suite.equality_mode == EqualityMode::float_tolerant ? "true" : "false") << ";\n";
    out << "    static final double EPSILON = " << double_literal(suite.epsilon) << ";\n";
    out << "    static final String ENTRY = " << java_string_literal(suite.entry_function) << ";\n\n";

    out << "    static String caseId(int idx) {\n        switch (idx) {\n";
    for (std::size_t i = 0; i < suite.cases.size(); ++i) {
        out << "        case " << i << ": return " << java_string_literal(sanitize_id(suite.cases[i].case_id))
            << ";\n";
    }
    out << "        }\n        throw new RuntimeException(\"bad case index\");\n    }\n\n";

    out << "    static Object[] caseArgs(int idx) {\n        switch (idx) {\n";
    for (std::size_t i = 0; i < suite.cases.size(); ++i) {
        out << "        case " << i << ": return new Object[]{";
        bool supported = true;
        std::string body;
        for (std::size_t k = 0; k < suite.cases[i].args.size(); ++k) {
            JavaLiteral lit = java_value(suite.cases[i].args[k]);
            if (!lit.ok) {
                supported = false;
                break;
            }
            if (k > 0) body += ", ";
            body += lit.expr;
        }
        if (!supported) {
            out << "}; // unsupported, flagged in runCase\n";
        } else {
            out << body << "};\n";
        }
    }
    out << "        }\n        throw new RuntimeException(\"bad case index\");\n    }\n\n";

    out << "    static Object caseExpected(int idx) {\n        switch (idx) {\n";
    for (std::size_t i = 0; i < suite.cases.size(); ++i) {
        JavaLiteral lit = java_value(suite.cases[i].expected);
        out << "        case " << i << ": return " << (lit.ok ? lit.expr : "null") << ";\n";
    }
    out << "        }\n        throw new RuntimeException(\"bad case index\");\n    }\n\n";

    out << "    static boolean caseSupported(int idx) {\n        switch (idx) {\n";
    for (std::size_t i = 0; i < suite.cases.size(); ++i) {
        bool supported = java_value(suite.cases[i].expected).ok;
        for (const auto& a : suite.cases[i].args) {
            supported = supported && java_value(a).ok;
        }
        out << "        case " << i << ": return " << (supported ? "true" : "false") << ";\n";
    }
    out << "        }\n        return false;\n    }\n";

    out << R"JAVA(
    public static void main(String[] argv) {
        int idx = Integer.parseInt(argv[0]);
        String id = caseId(idx);
        if (!caseSupported(idx)) {
            System.out.println("REASONTRANS CASE " + id + " ERROR unsupported-arguments");
            return;
        }
        try {
            Object[] args = caseArgs(idx);
            Object actual = invokeEntry(args);
            Object expected = caseExpected(idx);
            if (valueEquals(expected, actual)) {
                System.out.println("REASONTRANS CASE " + id + " PASS");
            } else {
                System.out.println("REASONTRANS CASE " + id + " FAIL expected=" + sanitize(repr(expected))
                        + " actual=" + sanitize(repr(actual)));
            }
        } catch (Throwable t) {
            System.out.println("REASONTRANS CASE " + id + " ERROR " + sanitize(String.valueOf(t)));
        }
    }

    static Object invokeEntry(Object[] args) throws Exception {
        File dir = new File(".");
        File[] files = dir.listFiles();
        if (files == null) {
            throw new RuntimeException("cannot list workdir");
        }
        Throwable lastFailure = null;
        for (int pass = 0; pass < 2; pass++) {
            for (File f : files) {
                String name = f.getName();
                if (!name.endsWith(".class") || name.contains("$")) {
                    continue;
                }
                String className = name.substring(0, name.length() - 6);
                if (className.equals("ReasontransDriver")) {
                    continue;
                }
                Class<?> cls = Class.forName(className);
                for (Method m : cls.getDeclaredMethods()) {
                    boolean nameMatches = pass == 0 ? m.getName().equals(ENTRY)
                                                    : m.getName().equalsIgnoreCase(ENTRY);
                    if (!nameMatches || m.getParameterCount() != args.length) {
                        continue;
                    }
                    try {
                        Class<?>[] types = m.getParameterTypes();
                        Object[] adapted = new Object[args.length];
                        for (int i = 0; i < args.length; i++) {
                            adapted[i] = adapt(args[i], types[i]);
                        }
                        m.setAccessible(true);
                        Object receiver = Modifier.isStatic(m.getModifiers())
                                ? null
                                : cls.getDeclaredConstructor().newInstance();
                        return m.invoke(receiver, adapted);
                    } catch (java.lang.reflect.InvocationTargetException e) {
                        throw e;  // the candidate itself threw; report it
                    } catch (Throwable t) {
                        lastFailure = t;  // signature mismatch; keep searching
                    }
                }
            }
        }
        throw new RuntimeException("entry-function-not-found: " + ENTRY
                + (lastFailure == null ? "" : " (" + lastFailure + ")"));
    }

    static Object adapt(Object v, Class<?> t) {
        if (v == null) {
            if (t.isPrimitive()) {
                throw new IllegalArgumentException("null for primitive");
            }
            return null;
        }
        if (t == int.class || t == Integer.class) return ((Number) v).intValue();
        if (t == long.class || t == Long.class) return ((Number) v).longValue();
        if (t == double.class || t == Double.class) return ((Number) v).doubleValue();
        if (t == float.class || t == Float.class) return ((Number) v).floatValue();
        if (t == short.class || t == Short.class) return ((Number) v).shortValue();
        if (t == byte.class || t == Byte.class) return ((Number) v).byteValue();
        if (t == boolean.class || t == Boolean.class) return (Boolean) v;
        if (t == char.class || t == Character.class) {
            String s = (String) v;
            if (s.length() != 1) {
                throw new IllegalArgumentException("expected single character");
            }
            return s.charAt(0);
        }
        if (t == String.class) return (String) v;
        if (t.isArray() && v instanceof List) {
            List<?> list = (List<?>) v;
            Object arr = Array.newInstance(t.getComponentType(), list.size());
            for (int i = 0; i < list.size(); i++) {
                Array.set(arr, i, adapt(list.get(i), t.getComponentType()));
            }
            return arr;
        }
        if (t.isAssignableFrom(ArrayList.class) && v instanceof List) {
            return new ArrayList<Object>((List<?>) v);
        }
        if (t.isInstance(v)) return v;
        throw new IllegalArgumentException("cannot adapt " + v.getClass() + " to " + t);
    }

    static boolean valueEquals(Object expected, Object actual) {
        if (expected == null || actual == null) {
            return expected == actual;
        }
        if (expected instanceof Boolean || actual instanceof Boolean) {
            return expected.equals(actual);
        }
        if (expected instanceof Number && actual instanceof Number) {
            Number e = (Number) expected;
            Number a = (Number) actual;
            boolean floating = expected instanceof Double || expected instanceof Float
                    || actual instanceof Double || actual instanceof Float;
            if (FLOAT_TOLERANT || floating) {
                double x = e.doubleValue();
                double y = a.doubleValue();
                if (Double.isNaN(x) && Double.isNaN(y)) return true;
                if (!FLOAT_TOLERANT) return x == y;
                double scale = Math.max(1.0, Math.max(Math.abs(x), Math.abs(y)));
                return Math.abs(x - y) <= EPSILON * scale;
            }
            return e.longValue() == a.longValue();
        }
        if (expected instanceof String && actual instanceof Character) {
            String s = (String) expected;
            return s.length() == 1 && s.charAt(0) == (Character) actual;
        }
        if (expected instanceof List) {
            List<?> e = (List<?>) expected;
            List<Object> a = toList(actual);
            if (a == null || e.size() != a.size()) {
                return false;
            }
            for (int i = 0; i < e.size(); i++) {
                if (!valueEquals(e.get(i), a.get(i))) return false;
            }
            return true;
        }
        return expected.equals(actual);
    }

    static List<Object> toList(Object v) {
        if (v instanceof List) {
            return new ArrayList<Object>((List<?>) v);
        }
        if (v != null && v.getClass().isArray()) {
            int n = Array.getLength(v);
            List<Object> out = new ArrayList<Object>(n);
            for (int i = 0; i < n; i++) {
                out.add(Array.get(v, i));
            }
            return out;
        }
        return null;
    }

    static String repr(Object v) {
        List<Object> asList = toList(v);
        if (asList != null && !(v instanceof String)) {
            StringBuilder sb = new StringBuilder("[");
            for (int i = 0; i < asList.size(); i++) {
                if (i > 0) sb.append(", ");
                sb.append(repr(asList.get(i)));
            }
            return sb.append("]").toString();
        }
        return String.valueOf(v);
    }

    static String sanitize(String s) {
        return s.replace("\n", "\\n").replace("\r", "\\r");
    }
}
)JAVA";
    return out.str();
}

std::string cpp_driver(const std::string& candidate_code, const TestSuite& suite) {
    std::ostringstream out;
    out << R"CPP(#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stack>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

using namespace std;

)CPP";
    out << "static const bool RT_FLOAT_TOLERANT = "
        << (suite.equality_mode == EqualityMode::float_tolerant ? "true" : "false") << ";\n";
    out << "static const double RT_EPSILON = " << double_literal(suite.epsilon) << ";\n";
    out << R"CPP(
template <class A, class B,
          typename std::enable_if<std::is_arithmetic<A>::value && std::is_arithmetic<B>::value,
                                  int>::type = 0>
bool rt_eq(const A& a, const B& b) {
    if (RT_FLOAT_TOLERANT || std::is_floating_point<A>::value || std::is_floating_point<B>::value) {
        const long double x = static_cast<long double>(a);
        const long double y = static_cast<long double>(b);
        if (std::isnan(static_cast<double>(x)) && std::isnan(static_cast<double>(y))) return true;
        if (!RT_FLOAT_TOLERANT) return x == y;
        const long double scale = std::max<long double>(1.0L, std::max(std::fabs(x), std::fabs(y)));
        return std::fabs(x - y) <= static_cast<long double>(RT_EPSILON) * scale;
    }
    return static_cast<long long>(a) == static_cast<long long>(b);
}

inline bool rt_eq(const std::string& a, const std::string& b) { return a == b; }
inline bool rt_eq(const std::string& a, const char* b) { return a == std::string(b); }
inline bool rt_eq(const char* a, const std::string& b) { return std::string(a) == b; }
inline bool rt_eq(const std::string& a, char b) { return a.size() == 1 && a[0] == b; }
inline bool rt_eq(char a, const std::string& b) { return rt_eq(b, a); }

template <class A, class B>
bool rt_eq(const std::vector<A>& a, const std::vector<B>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!rt_eq(a[i], b[i])) return false;
    }
    return true;
}

template <class T,
          typename std::enable_if<std::is_arithmetic<T>::value, int>::type = 0>
std::string rt_repr(const T& v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::string rt_repr(const std::string& v) { return "\"" + v + "\""; }
inline std::string rt_repr(const char* v) { return rt_repr(std::string(v)); }
inline std::string rt_repr(char v) { return std::string("'") + v + "'"; }

template <class T>
std::string rt_repr(const std::vector<T>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ", ";
        out += rt_repr(v[i]);
    }
    return out + "]";
}

static std::string rt_sanitize(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

// --- candidate code ---
)CPP";
    out << candidate_code << "\n";
    out << "// --- generated cases ---\n\n";

    for (std::size_t i = 0; i < suite.cases.size(); ++i) {
        const TestCase& c = suite.cases[i];
        out << "static void rt_case_" << i << "() {\n";
        out << "    const char* rt_id = " << cpp_string_literal(sanitize_id(c.case_id)) << ";\n";
        bool supported = true;
        std::vector<CppLiteral> args;
        for (const auto& a : c.args) {
            args.push_back(cpp_value(a));
            supported = supported && args.back().ok;
        }
        CppLiteral expected = cpp_value(c.expected);
        supported = supported && expected.ok;
        if (!supported) {
            out << "    std::cout << \"REASONTRANS CASE \" << rt_id << \" ERROR unsupported-arguments\\n\";\n";
            out << "}\n\n";
            continue;
        }
        out << "    try {\n";
        for (std::size_t k = 0; k < args.size(); ++k) {
            out << "        " << args[k].type << " rt_a" << k << " = " << args[k].expr << ";\n";
        }
        out << "        auto rt_actual = " << suite.entry_function << "(";
        for (std::size_t k = 0; k < args.size(); ++k) {
            if (k > 0) out << ", ";
            out << "rt_a" << k;
        }
        out << ");\n";
        out << "        " << expected.type << " rt_expected = " << expected.expr << ";\n";
        out << "        if (rt_eq(rt_actual, rt_expected)) {\n";
        out << "            std::cout << \"REASONTRANS CASE \" << rt_id << \" PASS\\n\";\n";
        out << "        } else {\n";
        out << "            std::cout << \"REASONTRANS CASE \" << rt_id << \" FAIL expected=\"\n";
        out << "                      << rt_sanitize(rt_repr(rt_expected)) << \" actual=\"\n";
        out << "                      << rt_sanitize(rt_repr(rt_actual)) << \"\\n\";\n";
        out << "        }\n";
        out << "    } catch (const std::exception& e) {\n";
        out << "        std::cout << \"REASONTRANS CASE \" << rt_id << \" ERROR \" << rt_sanitize(e.what()) << \"\\n\";\n";
        out << "    } catch (...) {\n";
        out << "        std::cout << \"REASONTRANS CASE \" << rt_id << \" ERROR unknown-exception\\n\";\n";
        out << "    }\n";
        out << "}\n\n";
    }

    out << "int main(int argc, char** argv) {\n";
    out << "    if (argc < 2) return 2;\n";
    out << "    const int rt_idx = std::atoi(argv[1]);\n";
    out << "    switch (rt_idx) {\n";
    for (std::size_t i = 0; i < suite.cases.size(); ++i) {
        out << "    case " << i << ": rt_case_" << i << "(); break;\n";
    }
    out << "    default: return 2;\n";
    out << "    }\n";
    out << "    return 0;\n";
    out << "}\n";
    return out.str();
}

}  // namespace reasontrans::driver_gen

"""
Config parsing and module expression evaluation

A config is line oriented; '#' starts a comment. Parse errors raise
ConfigError with the 1-based line and column of the offending token.
"""
import logging
import re
import shlex

from models.errors import ConfigError, StmodError
from models.report import CHECK_KINDS, CheckSpec, Claim, RunConfig
from services import construction_service, group_service, module_service, stable_service, word_service

logger = logging.getLogger(__name__)

_NAME = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')
_TOKEN = re.compile(r'\s*(?:(?P<str>"[^"]*")|(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[(),=]))')

MODULE_FUNCTIONS = ('trivial', 'regular', 'cyclic_quotient', 'induce', 'restrict', 'tensor', 'sum',
                    'dual', 'omega', 'word', 'band', 'theta')


def parse_claim(text, line=None, column=None):
    """'L..U', 'L..' or 'V'"""
    match = re.match(r'^(\d+)(?:\.\.(\d*))?$', text)
    if not match:
        raise ConfigError(f"bad claimed interval {text!r}", line, column)
    lower = int(match.group(1))
    if match.group(2) is None:
        return Claim(lower, lower)
    upper = int(match.group(2)) if match.group(2) else None
    if upper is not None and upper < lower:
        raise ConfigError(f"claimed interval {text!r} is empty", line, column)
    return Claim(lower, upper)


def _positive_int(value, key, line, column):
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be an integer, got {value!r}", line, column)
    if number <= 0:
        raise ConfigError(f"{key} must be positive, got {number}", line, column)
    return number


def _tokenize_expr(text, line, offset):
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == '':
            break
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise ConfigError(f"unexpected {text[pos:].strip()[:1]!r} in expression", line, offset + pos + 1)
        kind = match.lastgroup
        value = match.group(kind)
        column = offset + match.start(kind) + 1
        tokens.append((kind, value, column))
        pos = match.end()
    return tokens


class _ExprParser:
    """Recursive descent over name(args, key=value) expressions"""

    def __init__(self, tokens, line):
        self.tokens = tokens
        self.pos = 0
        self.line = line

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, None)

    def _take(self, kind=None, value=None):
        token = self._peek()
        if token[0] is None:
            raise ConfigError("unexpected end of expression", self.line)
        if (kind and token[0] != kind) or (value and token[1] != value):
            raise ConfigError(f"expected {value or kind}, got {token[1]!r}", self.line, token[2])
        self.pos += 1
        return token

    def parse(self):
        node = self._expr()
        token = self._peek()
        if token[0] is not None:
            raise ConfigError(f"unexpected {token[1]!r} after expression", self.line, token[2])
        return node

    def _expr(self):
        kind, value, column = self._take()
        if kind == 'int':
            return ('int', int(value), column)
        if kind == 'str':
            return ('str', value[1:-1], column)
        if kind != 'name':
            raise ConfigError(f"unexpected {value!r}", self.line, column)
        if self._peek()[1] != '(':
            return ('ref', value, column)
        self._take('op', '(')
        args, kwargs = [], {}
        while self._peek()[1] != ')':
            if self._peek()[0] == 'name' and self.pos + 1 < len(self.tokens) and self.tokens[self.pos + 1][1] == '=':
                key = self._take('name')[1]
                self._take('op', '=')
                kwargs[key] = self._expr()
            else:
                args.append(self._expr())
            if self._peek()[1] == ',':
                self._take('op', ',')
            elif self._peek()[1] != ')':
                token = self._peek()
                raise ConfigError(f"expected ',' or ')', got {token[1]!r}", self.line, token[2])
        self._take('op', ')')
        return ('call', value, args, kwargs, column)


def _extract_companion(text):
    """Pull phi=companion(...) out before tokenizing; polynomials are not expressions"""
    match = re.search(r'phi\s*=\s*companion\(([^()]*)\)', text)
    if not match:
        return text, None
    return text[:match.start()] + 'phi=0' + text[match.end():], match.group(1).strip()


def parse_module_expr(text, line=None, offset=0):
    """
    Parse a module expression into a tree of tuples.

    Returns:
        tuple: ('call', name, args, kwargs, column) / ('ref', ...) / ('int', ...) / ('str', ...)
    """
    stripped, poly = _extract_companion(text)
    tree = _ExprParser(_tokenize_expr(stripped, line, offset), line).parse()
    if poly is not None:
        tree = _attach_poly(tree, poly)
    _check_tree(tree, line)
    return tree


def _attach_poly(node, poly):
    if node[0] != 'call':
        return node
    _, name, args, kwargs, column = node
    kwargs = dict(kwargs)
    if name == 'band' and 'phi' in kwargs:
        kwargs['phi'] = ('poly', poly, kwargs['phi'][2])
    return ('call', name, [_attach_poly(a, poly) for a in args], kwargs, column)


def _check_tree(node, line):
    if node[0] == 'call':
        _, name, args, kwargs, column = node
        if name not in MODULE_FUNCTIONS:
            raise ConfigError(f"unknown module function {name!r}", line, column)
        for arg in args:
            _check_tree(arg, line)
    elif node[0] == 'ref' and node[1] in MODULE_FUNCTIONS and node[1] not in ('trivial', 'regular'):
        raise ConfigError(f"{node[1]} needs arguments", line, node[2])


def _refs(node):
    if node[0] == 'ref':
        yield node
    elif node[0] == 'call':
        args = node[2][:1] if node[1] in ('induce', 'restrict') else node[2]
        for arg in args:
            yield from _refs(arg)


def _split_options(tokens, line, raw):
    """key=value tokens into a dict with columns; bare tokens into a list"""
    options, bare = {}, []
    for token in tokens:
        column = raw.find(token.split('=')[0]) + 1
        if '=' in token:
            key, value = token.split('=', 1)
            options[key] = (value, column)
        else:
            bare.append((token, column))
    return options, bare


def _parse_check(rest, line, raw, config):
    try:
        tokens = shlex.split(rest)
    except ValueError as e:
        raise ConfigError(f"cannot split check arguments: {e}", line)
    if not tokens:
        raise ConfigError("check needs a kind", line, raw.find('check') + 1)
    kind = tokens[0]
    if kind not in CHECK_KINDS:
        raise ConfigError(f"unknown check kind {kind!r}", line, raw.find(kind) + 1)
    options, bare = _split_options(tokens[1:], line, raw)
    target = ''
    if kind != 'word_identities':
        if not bare:
            raise ConfigError(f"check {kind} needs a target", line, raw.find(kind) + 1)
        target, column = bare[0]
        pool = config.groups if kind in ('classification_row', 'group_bounds') else config.modules
        if target not in pool:
            raise ConfigError(f"unknown name {target!r}", line, column)
        bare = bare[1:]
    if bare:
        raise ConfigError(f"unexpected argument {bare[0][0]!r}", line, bare[0][1])
    parsed = {}
    for key, (value, column) in options.items():
        if key in ('window', 'nmax', 'q'):
            parsed[key] = _positive_int(value, key, line, column)
        elif key == 'claimed':
            parsed[key] = parse_claim(value, line, column)
        elif key == 'cite':
            parsed[key] = value
        elif key == 'witnesses':
            if value not in ('auto', 'none') and not re.match(r'^central\([^()]+\)$', value):
                raise ConfigError(f"witnesses must be auto, none or central(x), got {value!r}", line, column)
            parsed[key] = value
        elif key == 'testers':
            names = [name for name in value.split(',') if name]
            for name in names:
                if name not in config.modules:
                    raise ConfigError(f"unknown name {name!r}", line, column)
            parsed[key] = names
        else:
            raise ConfigError(f"unknown option {key!r} for check {kind}", line, column)
    if kind == 'word_identities' and 'q' not in parsed:
        raise ConfigError("word_identities needs q=Q", line, raw.find(kind) + 1)
    return CheckSpec(kind, target, parsed, line)


def parse_config(text, name='config'):
    """
    Parse a config.

    Args:
        text: config contents
        name: label used in reports and run history

    Returns:
        RunConfig
    """
    config = RunConfig(name=name, text=text)
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].rstrip()
        if not line.strip():
            continue
        keyword, _, rest = line.strip().partition(' ')
        rest = rest.strip()
        column = raw.find(keyword) + 1
        if keyword == 'prime':
            config.prime = _positive_int(rest, 'prime', number, column + len(keyword) + 1)
        elif keyword == 'seed':
            try:
                config.seed = int(rest)
            except ValueError:
                raise ConfigError(f"seed must be an integer, got {rest!r}", number, column + len(keyword) + 1)
        elif keyword == 'output':
            if not rest:
                raise ConfigError("output needs a path", number, column)
            config.output = rest
        elif keyword == 'group':
            _parse_group(config, rest, number, raw)
        elif keyword == 'module':
            _parse_module(config, rest, number, raw)
        elif keyword == 'check':
            config.checks.append(_parse_check(rest, number, raw, config))
        else:
            raise ConfigError(f"unknown statement {keyword!r}", number, column)
    logger.debug(f"Parsed config {name}: {len(config.groups)} groups, {len(config.modules)} modules, "
                 f"{len(config.checks)} checks")
    return config


def _definition(rest, line, raw, what):
    target, eq, expr = rest.partition('=')
    target = target.strip()
    if not eq or not _NAME.match(target):
        raise ConfigError(f"expected '{what} NAME = expression'", line, raw.find(what) + 1)
    return target, expr.strip(), raw.find(expr.strip()) if expr.strip() else len(raw)


def _parse_group(config, rest, line, raw):
    target, expr, offset = _definition(rest, line, raw, 'group')
    try:
        group = group_service.build_group(expr)
    except StmodError as e:
        raise ConfigError(str(e), line, offset + 1)
    if config.prime is not None and group.order > 1 and group.prime != config.prime:
        raise ConfigError(f"{group.name} is not a {config.prime}-group", line, offset + 1)
    config.groups[target] = expr


def _parse_module(config, rest, line, raw):
    target, expr, offset = _definition(rest, line, raw, 'module')
    match = re.match(r'^(.*?)\s+over\s+([A-Za-z_][A-Za-z0-9_]*)$', expr)
    group_name = config.default_group
    if match:
        expr, group_name = match.group(1), match.group(2)
        if group_name not in config.groups:
            raise ConfigError(f"unknown group {group_name!r}", line, raw.rfind(group_name) + 1)
    if group_name is None:
        raise ConfigError("a module needs a group declared before it", line, offset + 1)
    tree = parse_module_expr(expr, line, offset)
    for ref in _refs(tree):
        if ref[1] not in ('trivial', 'regular') and ref[1] not in config.modules:
            raise ConfigError(f"unknown name {ref[1]!r}", line, ref[2])
    config.modules[target] = (expr, group_name, line)


def resolve_prime(config, group):
    return config.prime or group.prime


class ModuleBuilder:
    """Evaluates the named modules of a config, caching each by name"""

    def __init__(self, config):
        self.config = config
        self.cache = {}
        self._line = None

    def group(self, name):
        return group_service.build_group(self.config.groups[name])

    def module(self, name):
        if name not in self.cache:
            expr, group_name, line = self.config.modules[name]
            group = self.group(group_name)
            tree = parse_module_expr(expr, line)
            outer, self._line = self._line, line
            try:
                result = self._eval(tree, group, resolve_prime(self.config, group))
            except ConfigError:
                raise
            except StmodError as e:
                raise ConfigError(f"module {name}: {e}", line)
            finally:
                self._line = outer
            if not result.label or result.label.startswith('sub('):
                result = type(result)(result.group, result.p, result.action, label=name,
                                      certified_indecomposable=result.certified_indecomposable)
            self.cache[name] = result
        return self.cache[name]

    def _int(self, node, line):
        if node[0] != 'int':
            raise ConfigError("expected an integer", line, node[2])
        return node[1]

    def _elements(self, group, nodes, line):
        elements = []
        for node in nodes:
            if node[0] not in ('ref', 'str', 'int'):
                raise ConfigError("expected a group element", line, node[2])
            elements.append(group_service.element_from_word(group, str(node[1])))
        return elements

    def _eval(self, node, group, p):
        line = self._line
        if node[0] == 'ref':
            if node[1] == 'trivial':
                return module_service.trivial_module(group, p)
            if node[1] == 'regular':
                return module_service.regular_module(group, p)
            m = self.module(node[1])
            if m.group is not group:
                raise ConfigError(f"{node[1]} lives over {m.group.name}, not {group.name}", line, node[2])
            return m
        if node[0] != 'call':
            raise ConfigError("expected a module expression", line, node[2])
        _, name, args, kwargs, column = node
        if name == 'cyclic_quotient':
            return module_service.cyclic_quotient(group, p, self._int(args[0], line))
        if name == 'induce':
            e = group_service.subgroup(group, self._elements(group, args[1:], line))
            return module_service.induce(self._eval(args[0], e.sub, p), e).module
        if name == 'restrict':
            e = group_service.subgroup(group, self._elements(group, args[1:], line))
            return module_service.restrict(self._eval(args[0], group, p), e)
        if name == 'tensor':
            return module_service.tensor(self._eval(args[0], group, p), self._eval(args[1], group, p))
        if name == 'sum':
            return module_service.direct_sum([self._eval(a, group, p) for a in args], group, p)[0]
        if name == 'dual':
            return module_service.dual(self._eval(args[0], group, p))
        if name == 'omega':
            return stable_service.omega(self._eval(args[0], group, p), self._int(args[1], line))
        if name == 'theta':
            return construction_service.tensor_of_cyclics(group, p, [self._int(a, line) for a in args])
        if name in ('word', 'band'):
            return self._word(name, args, kwargs, group, p, line, column)
        raise ConfigError(f"{name} is not a module function", line, column)

    def _word(self, name, args, kwargs, group, p, line, column):
        if not args or args[0][0] != 'str':
            raise ConfigError(f"{name} needs a quoted word", line, column)
        q = self._int(kwargs['q'], line) if 'q' in kwargs else group.order // 4
        variables = {'q': q}
        word = word_service.parse_word(args[0][1], variables)
        dihedral = group.name.startswith('dihedral')
        if name == 'word':
            if dihedral:
                return word_service.string_module(word, group=group)
            return word_service.lambda_prime_module(word, group, p)
        auto, certified = None, False
        if 'phi' in kwargs:
            auto, certified = word_service.companion(kwargs['phi'][1], p)
        desc = word_service.band_descriptor(word, auto, p, auto_certified=certified)
        if dihedral:
            return word_service.band_module(desc, group=group)
        return word_service.lambda_prime_module(desc, group, p)


def build_modules(config):
    """Every named module of a config"""
    builder = ModuleBuilder(config)
    return {name: builder.module(name) for name in config.modules}

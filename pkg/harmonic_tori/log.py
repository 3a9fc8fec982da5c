"""
Logging for the command line and the numerical modules: level colours on a terminal, and
residual report lines which render the same record plainly or in colour.
"""
import json
import logging
import logging.config
import platform
import re
import traceback

import pygments
from devtools import pformat
from devtools.ansi import sformat
from devtools.utils import isatty
from pygments.formatters import Terminal256Formatter
from pygments.lexers import Python3TracebackLexer

solver_logger = logging.getLogger('htori.solver')
quad_logger = logging.getLogger('htori.quad')
verify_logger = logging.getLogger('htori.verify')
main_logger = logging.getLogger('htori.main')

LEVEL_STYLES = {
    logging.DEBUG: sformat.dim,
    logging.INFO: sformat.green,
    logging.WARN: sformat.yellow,
}
TIME_PREFIX = re.compile(r'^(\[.*?\])')
TRACEBACK_LEXER = Python3TracebackLexer()
TRACEBACK_FORMATTER = Terminal256Formatter(style='vim')

# one handler per formatter, named alike
FORMATTERS = {
    'default': ('[%(asctime)s] %(message)s', 'DefaultFormatter'),
    'no_ts': ('%(message)s', 'DefaultFormatter'),
    'report': ('%(message)s', 'ReportFormatter'),
}
ROUTES = {
    solver_logger: 'default',
    quad_logger: 'default',
    verify_logger: 'report',
    main_logger: 'no_ts',
}


def colour_enabled(stream) -> bool:
    return isatty(stream) and platform.system().lower() != 'windows'


class HighlightStreamHandler(logging.StreamHandler):
    def setFormatter(self, fmt):
        super().setFormatter(fmt)
        fmt.stream_is_tty = colour_enabled(self.stream)


class DefaultFormatter(logging.Formatter):
    stream_is_tty = False

    def format(self, record):
        msg = super().format(record)
        if not self.stream_is_tty:
            return msg
        style = LEVEL_STYLES.get(record.levelno, sformat.red)
        m = TIME_PREFIX.match(msg)
        if not m:
            return sformat(msg, style)
        return sformat(m.group(1), sformat.magenta) + sformat(msg[m.end():], style)


class ReportFormatter(logging.Formatter):
    """
    Renders messages built by ``report_line``; anything else passes through. A ``details``
    dict on the record is pretty printed above the line.
    """
    stream_is_tty = False

    def formatMessage(self, record):
        msg = super().formatMessage(record)
        if msg.startswith('{'):
            msg = self.render(json.loads(msg))
        details = getattr(record, 'details', None)
        if details:
            msg = 'details: %s\n%s' % (pformat(details, highlight=self.stream_is_tty), msg)
        return msg

    def render(self, line: dict) -> str:
        if not self.stream_is_tty:
            return '%(time)s %(prefix)s %(msg)s' % line
        return ' '.join((
            sformat(line['time'], sformat.magenta),
            sformat(line['prefix'], sformat.blue),
            sformat(line['msg'], sformat.dim if line['dim'] else sformat.reset),
        ))

    def formatException(self, ei):
        stack = ''.join(traceback.format_exception(*ei))
        if self.stream_is_tty:
            return pygments.highlight(stack, lexer=TRACEBACK_LEXER, formatter=TRACEBACK_FORMATTER).rstrip('\n')
        return stack


def report_line(time: str, prefix: str, msg: str, dim: bool = False) -> str:
    return json.dumps({'time': time, 'prefix': prefix, 'msg': msg, 'dim': dim})


def log_config(verbose: bool) -> dict:
    """
    dictConfig for the htori loggers.
    :param verbose: level: DEBUG if True, INFO if False
    """
    level = 'DEBUG' if verbose else 'INFO'
    formatters = {
        name: {'format': fmt, 'class': 'harmonic_tori.log.%s' % cls}
        for name, (fmt, cls) in FORMATTERS.items()
    }
    formatters['default']['datefmt'] = '%H:%M:%S'
    handlers = {
        name: {'level': level, 'class': 'harmonic_tori.log.HighlightStreamHandler', 'formatter': name}
        for name in FORMATTERS
    }
    loggers = {}
    for logger, handler in ROUTES.items():
        loggers[logger.name] = {'handlers': [handler], 'level': level}
        if handler == 'report':
            loggers[logger.name]['propagate'] = False
    return {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': formatters,
        'handlers': handlers,
        'loggers': loggers,
    }


def setup_logging(verbose):
    logging.config.dictConfig(log_config(verbose))

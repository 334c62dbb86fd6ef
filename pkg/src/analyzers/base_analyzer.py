"""
Analysis pipelines share one result container and a name registry so the
command line can run any of them by name with string parameters
"""
from abc import ABC, abstractmethod
from datetime import datetime
from typing import Any, Dict, List

import pandas as pd

from ..utils.errors import InputError


class AnalysisResult:
    """
    Outcome of one pipeline run

    ``payload`` becomes the report's result field, ``detailed_report`` the
    per-vertex (or per-replicate) table and ``tables`` any extra bulk tables.
    ``artifact`` keeps the native result object for figures.
    """

    def __init__(self, method_name: str):
        self.method_name = method_name
        self.analysis_date = datetime.now()
        self.payload: Dict[str, Any] = {}
        self.tables: Dict[str, pd.DataFrame] = {}
        self.recommendations: List[str] = []
        self.summary: str = ""
        self.detailed_report: pd.DataFrame = pd.DataFrame()
        self.metadata: Dict[str, Any] = {}
        self.artifact: Any = None

    def add_recommendation(self, recommendation: str):
        self.recommendations.append(recommendation)

    def add_table(self, name: str, table: pd.DataFrame):
        """Attach a bulk table written as delimited text next to the report"""
        self.tables[name] = table


class BaseAnalyzer(ABC):
    """Base class for analysis pipelines"""

    def __init__(self, name: str, description: str):
        self.name = name
        self.description = description
        self.required_inputs: List[str] = []
        self.questions: List[Dict[str, Any]] = []

    @abstractmethod
    def analyze(self, **kwargs) -> AnalysisResult:
        """
        Run the analysis

        Returns:
            AnalysisResult object
        """
        pass

    def get_questions(self) -> List[Dict[str, Any]]:
        """
        Parameters the analysis accepts

        Returns:
            List of dictionaries with:
            - question: str (what the parameter controls)
            - key: str (parameter key)
            - type: str (int, float, bool, str)
            - default: Any (default value)
            - help: str (help text)
        """
        return self.questions

    def get_suggestions(self, **kwargs) -> List[str]:
        """
        Suggestions based on current inputs

        Returns:
            List of suggestion strings
        """
        return []

    def validate_inputs(self, **kwargs) -> tuple[bool, str]:
        """
        Validate required inputs

        Returns:
            Tuple of (is_valid, error_message)
        """
        for required in self.required_inputs:
            if required not in kwargs or kwargs[required] is None:
                return False, f"Missing required input: {required}"

        return True, ""

    def resolve_parameters(self, **kwargs) -> Dict[str, Any]:
        """
        Defaults from ``questions`` overridden by kwargs, coerced to the declared type

        Raises:
            InputError: If a value cannot be coerced
        """
        params = dict(kwargs)
        for q in self.questions:
            key = q['key']
            value = params.get(key, q.get('default'))
            params[key] = coerce(value, q.get('type', 'str'), key)
        return params

    def run(self, **kwargs) -> AnalysisResult:
        is_valid, error = self.validate_inputs(**kwargs)
        if not is_valid:
            raise InputError(error)
        return self.analyze(**self.resolve_parameters(**kwargs))


def coerce(value: Any, kind: str, key: str = '') -> Any:
    """Coerce a parameter (often a command-line string) to int, float, bool or str"""
    if value is None:
        return None
    try:
        if kind == 'int':
            return int(value)
        if kind == 'float':
            return float(value)
        if kind == 'bool':
            if isinstance(value, str):
                lowered = value.strip().lower()
                if lowered in ('1', 'true', 'yes', 'on'):
                    return True
                if lowered in ('0', 'false', 'no', 'off'):
                    return False
                raise ValueError(value)
            return bool(value)
    except (TypeError, ValueError):
        raise InputError(f"parameter {key}: cannot read {value!r} as {kind}")
    return value


class AnalyzerFactory:
    """Name registry of pipelines"""

    _analyzers: Dict[str, type] = {}

    @classmethod
    def register(cls, analyzer_class):
        """Class decorator; pipeline names must be unique"""
        name = analyzer_class().name
        if cls._analyzers.get(name, analyzer_class) is not analyzer_class:
            raise ValueError(f"pipeline name already registered: {name}")
        cls._analyzers[name] = analyzer_class
        return analyzer_class

    @classmethod
    def create(cls, name: str) -> BaseAnalyzer:
        """
        Raises:
            ValueError: If no pipeline is registered under ``name``
        """
        if name not in cls._analyzers:
            raise ValueError(f"Unknown analysis method: {name}. "
                             f"Available methods: {', '.join(sorted(cls._analyzers))}")
        return cls._analyzers[name]()

    @classmethod
    def get_available_methods(cls) -> List[Dict[str, Any]]:
        """Registered pipelines with their description and parameter keys"""
        methods = []
        for name, analyzer_class in sorted(cls._analyzers.items()):
            instance = analyzer_class()
            methods.append({
                'name': name,
                'description': instance.description,
                'parameters': [q['key'] for q in instance.get_questions()],
            })
        return methods

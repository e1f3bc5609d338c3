"""
Markdown run summary written next to the JSON reports
"""
import logging
from datetime import datetime
from pathlib import Path
from string import Template
from typing import Dict, Any, List, Optional

from ..utils.utils import config_hash, module_versions

logger = logging.getLogger("lagexp.summary")


class RunSummaryGenerator:
    """Generates run_summary.md from the pipeline context"""

    def __init__(self, context: Dict[str, Any], command: str):
        self.context = context
        self.command = command
        self.template_path = Path(__file__).parent / "run_summary.md.template"

    def _results_section(self) -> str:
        results = self.context.get('results', {})
        if not results:
            return "No step produced results."
        blocks = []
        for step, lines in results.items():
            body = '\n'.join(f"- {line}" for line in lines) if lines else "- (nothing recorded)"
            blocks.append(f"### {step}\n\n{body}\n")
        return '\n'.join(blocks)

    def _outputs_section(self) -> str:
        outputs = self.context.get('outputs', {})
        if not outputs:
            return "None."
        return '\n'.join(f"- {label}: `{path}`" for label, path in sorted(outputs.items()))

    def generate(self, success: bool, failed_step: Optional[str] = None) -> bool:
        """
        Generate the run summary

        Returns:
            bool: True if summary was generated successfully, False otherwise
        """
        try:
            if not self.template_path.exists():
                logger.error(f"Template file not found: {self.template_path}")
                return False

            with open(self.template_path, 'r') as f:
                template = Template(f.read())

            config = self.context.get('config', {})
            versions = ', '.join(f"{k} {v}" for k, v in module_versions().items())
            variables = {
                'COMMAND': self.command,
                'RUN_NAME': config.get('name', 'unnamed'),
                'MODE': config.get('mode', 'n/a'),
                'STATUS': 'succeeded' if success else 'failed',
                'FAILED_STEP': f" (in step `{failed_step}`)" if failed_step else '',
                'RUN_DATE': datetime.now().strftime('%Y-%m-%d %H:%M:%S'),
                'CONFIG_HASH': config_hash(config),
                'VERSIONS': versions,
                'RESULTS': self._results_section(),
                'OUTPUTS': self._outputs_section(),
            }

            summary = template.safe_substitute(variables)
            summary_path = Path(self.context['out_dir']) / 'run_summary.md'
            with open(summary_path, 'w') as f:
                f.write(summary)

            logger.info(f"Run summary written to {summary_path}")
            return True

        except Exception as e:
            logger.error(f"Failed to generate run summary: {str(e)}")
            return False

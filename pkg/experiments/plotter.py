import logging

import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots


class Plotter:
    """Learning curves per family: mean test return across runs, and mean train return where one exists."""

    def __init__(self, series: pd.DataFrame):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.series = series

    def build_figure(self) -> go.Figure:
        families = list(dict.fromkeys(self.series["family"]))
        fig = make_subplots(rows=max(len(families), 1), cols=1, shared_xaxes=True, subplot_titles=families)

        for row, family in enumerate(families, start=1):
            family_series = self.series[self.series["family"] == family]
            for (xi, mode), group in family_series.groupby(["xi", "mode"]):
                self._add_curve(fig, group, "test_return", f"{mode} test (xi={xi})", row, dash=None)
                if group["train_return"].notna().any():
                    self._add_curve(fig, group, "train_return", f"{mode} train (xi={xi})", row, dash="dot")

        fig.update_layout(title="Zero-shot generalization learning curves", xaxis_title="Epoch", showlegend=True)
        return fig

    def _add_curve(
        self,
        fig: go.Figure,
        group: pd.DataFrame,
        column: str,
        name: str,
        row: int,
        dash: str | None,
    ) -> None:
        curve = group.groupby("epoch")[column].mean()
        fig.add_trace(
            go.Scatter(x=curve.index, y=curve.values, mode="lines", name=name, line={"dash": dash}),
            row=row,
            col=1,
        )

    def save_html(self, file_path: str) -> None:
        self.build_figure().write_html(file_path)
        self.logger.info(f"Learning curves written to {file_path}")

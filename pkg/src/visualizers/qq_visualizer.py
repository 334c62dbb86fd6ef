"""
QQ plots and standardized-statistic scatter plots
"""
import plotly.graph_objects as go
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd


class StatisticVisualizer:
    """Plotly figures for standardized rooted densities"""

    def __init__(self):
        self.colors = {
            'accepted': 'rgb(66, 133, 244)',   # Blue
            'rejected': 'rgb(255, 65, 54)',    # Red
            'reference': 'rgb(120, 120, 120)', # Gray
            'bonferroni': 'rgb(255, 185, 0)',  # Orange
        }

    def create_qq_plot(self, qq: pd.DataFrame, d: int,
                       title: str = "QQ plot of ||t||^2") -> go.Figure:
        """
        Sorted statistics against chi2(d) quantiles

        Args:
            qq: Table with 'theoretical' and 'empirical' columns
            d: Degrees of freedom of the reference distribution
            title: Chart title

        Returns:
            Plotly figure
        """
        if qq is None or qq.empty:
            fig = go.Figure()
            fig.add_annotation(
                text="No replicates to display",
                xref="paper", yref="paper",
                x=0.5, y=0.5, showarrow=False
            )
            return fig

        fig = go.Figure()
        fig.add_trace(go.Scatter(
            x=qq['theoretical'],
            y=qq['empirical'],
            mode='markers',
            marker=dict(color=self.colors['accepted'], size=6),
            name='replicates',
            hovertemplate="chi2 quantile: %{x:.3f}<br>observed: %{y:.3f}<extra></extra>"
        ))
        top = float(max(qq['theoretical'].max(), qq['empirical'].max()))
        fig.add_trace(go.Scatter(
            x=[0, top], y=[0, top],
            mode='lines',
            line=dict(color=self.colors['reference'], dash='dash'),
            name='y = x'
        ))

        fig.update_layout(
            title=title,
            xaxis=dict(title=f'chi2({d}) quantile'),
            yaxis=dict(title='observed ||t||^2'),
            height=500,
            hovermode='closest'
        )
        return fig

    def create_statistic_scatter(self, t_hat: np.ndarray, critical_value: float,
                                 bonferroni_value: Optional[float] = None,
                                 labels: Optional[list] = None,
                                 title: str = "Standardized densities") -> go.Figure:
        """
        First two coordinates of t_i with the critical circles

        A vertex is rejected when it falls outside the circle of radius
        sqrt(critical_value).
        """
        t_hat = np.atleast_2d(np.asarray(t_hat, dtype=float))
        if t_hat.shape[1] == 1:
            t_hat = np.hstack([t_hat, np.zeros_like(t_hat)])
        labels = labels or ['t_1', 't_2']
        stat = np.sum(t_hat ** 2, axis=1)
        rejected = stat > critical_value

        fig = go.Figure()
        for flag, name in ((False, 'accepted'), (True, 'rejected')):
            mask = rejected == flag
            fig.add_trace(go.Scatter(
                x=t_hat[mask, 0],
                y=t_hat[mask, 1],
                mode='markers',
                marker=dict(color=self.colors[name], size=6),
                name=name,
                text=[f"vertex {i}" for i in np.flatnonzero(mask)],
                hovertemplate="<b>%{text}</b><br>(%{x:.2f}, %{y:.2f})<extra></extra>"
            ))

        angle = np.linspace(0, 2 * np.pi, 200)
        circles = [('bootstrap', critical_value, self.colors['rejected'])]
        if bonferroni_value is not None:
            circles.append(('Bonferroni', bonferroni_value, self.colors['bonferroni']))
        for name, value, color in circles:
            radius = np.sqrt(value)
            fig.add_trace(go.Scatter(
                x=radius * np.cos(angle), y=radius * np.sin(angle),
                mode='lines', line=dict(color=color, dash='dot'),
                name=f'{name} critical value'
            ))

        fig.update_layout(
            title=title,
            xaxis=dict(title=labels[0], scaleanchor='y'),
            yaxis=dict(title=labels[1] if len(labels) > 1 else ''),
            height=600,
            hovermode='closest'
        )
        return fig


def write_figure(fig: go.Figure, path: Union[str, Path]) -> str:
    """Write a figure as standalone HTML"""
    fig.write_html(str(path), include_plotlyjs='cdn')
    return str(path)
